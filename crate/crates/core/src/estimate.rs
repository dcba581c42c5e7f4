//! Least-squares INAR(p) fits to count series and the kernel estimate they
//! imply when the series are Hawkes bin counts.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::math::sqrt;
use crate::series::CountSeries;

/// Observations beyond `p` that a fit needs.
pub const MIN_EXTRA_OBS: usize = 10;

/// Ordinary least squares of `X_n` on `(1, X_{n−1}, …, X_{n−p})`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LsFit {
    pub alpha0: f64,
    pub alphas: Vec<f64>,
    /// `RSS / (m − p − 1)` over the `m` regression rows.
    pub residual_variance: f64,
    /// Classical OLS standard errors, intercept first.
    pub std_errors: Vec<f64>,
    pub n_obs: usize,
}

/// Fits an INAR(p) by unconstrained least squares; slopes may come out
/// negative. Needs more than `p + 10` values.
pub fn fit_inar_ls(series: &CountSeries, p: usize) -> Result<LsFit> {
    let x: Vec<f64> = series.as_f64();
    let n = x.len();
    if n <= p + MIN_EXTRA_OBS {
        return Err(Error::SeriesTooShort {
            len: n,
            need: p + MIN_EXTRA_OBS + 1,
        });
    }
    let m = n - p;
    let dim = p + 1;
    // Rows are n = p..N−1 with regressors x_{n−j}, j = 1..p.
    let mut xtx = alloc::vec![0.0; dim * dim];
    let mut xty = alloc::vec![0.0; dim];
    xtx[0] = m as f64;
    xty[0] = x[p..].iter().sum();
    for j in 1..=p {
        let col = &x[p - j..n - j];
        let s: f64 = col.iter().sum();
        xtx[j] = s;
        xtx[j * dim] = s;
        xty[j] = col.iter().zip(&x[p..]).map(|(a, b)| a * b).sum();
    }
    // First lag row directly, the rest along diagonals:
    // S(i+1, j+1) = S(i, j) − x_{N−1−i} x_{N−1−j} + x_{p−1−i} x_{p−1−j}.
    for j in 1..=p {
        let v: f64 = x[p - 1..n - 1].iter().zip(&x[p - j..n - j]).map(|(a, b)| a * b).sum();
        xtx[dim + j] = v;
        xtx[j * dim + 1] = v;
    }
    for i in 1..p {
        for j in i..p {
            let v = xtx[i * dim + j] - x[n - 1 - i] * x[n - 1 - j] + x[p - 1 - i] * x[p - 1 - j];
            xtx[(i + 1) * dim + j + 1] = v;
            xtx[(j + 1) * dim + i + 1] = v;
        }
    }
    let chol = Cholesky::new(&xtx, dim, 1e-10)?;
    let coef = chol.solve(&xty);
    let rss: f64 = (p..n)
        .map(|t| {
            let fit = coef[0] + (1..=p).map(|j| coef[j] * x[t - j]).sum::<f64>();
            (x[t] - fit) * (x[t] - fit)
        })
        .sum();
    let dof = m.saturating_sub(dim).max(1);
    let sigma2 = rss / dof as f64;
    let std_errors = chol.inverse_diagonal().into_iter().map(|d| sqrt(sigma2 * d)).collect();
    Ok(LsFit {
        alpha0: coef[0],
        alphas: coef[1..].to_vec(),
        residual_variance: sigma2,
        std_errors,
        n_obs: m,
    })
}

/// `η̂ = α̂0/Δ` and `ĥ(kΔ) = α̂_k/Δ` from an INAR(p) fit to bin counts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelEstimate {
    pub delta: f64,
    pub eta_hat: f64,
    pub h_hat: Vec<f64>,
    pub residual_variance: f64,
}

impl KernelEstimate {
    /// `η̂ / (1 − Δ Σ_k ĥ(kΔ))`, the plug-in event rate.
    pub fn implied_rate(&self) -> f64 {
        self.eta_hat / (1.0 - self.delta * self.h_hat.iter().sum::<f64>())
    }

    /// How many `ĥ(kΔ)` came out negative.
    pub fn negative_count(&self) -> usize {
        self.h_hat.iter().filter(|&&h| h < 0.0).count()
    }

    /// `(k, kΔ, ĥ(kΔ))` rows.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.h_hat
            .iter()
            .enumerate()
            .map(move |(i, &h)| (i + 1, (i + 1) as f64 * self.delta, h))
    }
}

/// Kernel estimate from the series' own grid width.
pub fn estimate_kernel(series: &CountSeries, p: usize) -> Result<KernelEstimate> {
    let fit = fit_inar_ls(series, p)?;
    let delta = series.delta();
    Ok(KernelEstimate {
        delta,
        eta_hat: fit.alpha0 / delta,
        h_hat: fit.alphas.iter().map(|a| a / delta).collect(),
        residual_variance: fit.residual_variance,
    })
}
