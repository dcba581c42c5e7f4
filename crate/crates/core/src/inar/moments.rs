//! Closed-form and recursively exact moments of an INAR(∞) process.
//!
//! Quantities that depend on the whole coefficient sequence (β, R) are
//! computed from the explicit coefficients `α_1..α_p`; the `tail_bound` of
//! [`InarParams`] only enters [`inar_mean`] and the truncation helpers.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::params::InarParams;
use crate::series::CountSeries;

/// Longest β expansion any routine here will build.
pub const MAX_BETA_LEN: usize = 10_000_000;

/// `α0 / (1 − K)`.
pub fn inar_mean(params: &InarParams) -> f64 {
    params.alpha0() / (1.0 - params.reproduction_mean())
}

/// `β_0..β_{n_max}` from `β_0 = 1`, `β_k = Σ_i α_i β_{k−i}`.
pub fn beta_coeffs(params: &InarParams, n_max: usize) -> Vec<f64> {
    let alphas = params.alphas();
    let mut beta = Vec::with_capacity(n_max + 1);
    beta.push(1.0);
    for k in 1..=n_max {
        let m = k.min(alphas.len());
        let b: f64 = (1..=m).map(|i| alphas[i - 1] * beta[k - i]).sum();
        beta.push(b);
    }
    beta
}

/// β coefficients up to the first index whose remaining tail is below a
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaExpansion {
    pub betas: Vec<f64>,
    /// `Σ_{k>L} β_k` with `L = betas.len() − 1`.
    pub tail: f64,
    /// `Σ_k β_k = 1/(1 − Σα_k)`.
    pub total: f64,
}

/// Extends the β recursion until `Σ_{k>L} β_k < tol`. The tail is exact: it
/// is `1/(1 − Σα_k) − Σ_{k≤L} β_k`, summed with compensation so it can be
/// driven well below `1e−9`.
pub fn beta_expansion(params: &InarParams, tol: f64) -> Result<BetaExpansion> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be > 0"));
    }
    let alphas = params.alphas();
    let total = 1.0 / (1.0 - params.explicit_mass());
    let mut betas = Vec::new();
    betas.push(1.0);
    let (mut sum, mut comp) = (1.0f64, 0.0f64);
    let mut tail = total - 1.0;
    while tail >= tol {
        let k = betas.len();
        if k > MAX_BETA_LEN {
            return Err(Error::TailTooHeavy {
                tail,
                cap: MAX_BETA_LEN,
            });
        }
        let m = k.min(alphas.len());
        let b: f64 = (1..=m).map(|i| alphas[i - 1] * betas[k - i]).sum();
        betas.push(b);
        // Neumaier summation
        let t = sum + b;
        if sum.abs() >= b.abs() {
            comp += (sum - t) + b;
        } else {
            comp += (b - t) + sum;
        }
        sum = t;
        tail = total - (sum + comp);
    }
    Ok(BetaExpansion {
        betas,
        tail: tail.max(0.0),
        total,
    })
}

/// `R(0)..R(max_lag)` with `R(j) = α0/(1 − K) Σ_k β_k β_{k+j}`.
///
/// The inner sum stops at the first `N` with `α0/(1 − K)·T_N² < tol`, where
/// `T_N` is the β tail past `N`; every dropped term `β_k β_{k+j}` with `k > N`
/// is at most `β_k·T_N`, so each lag is off by less than `tol`.
pub fn autocovariance(params: &InarParams, max_lag: usize, tol: f64) -> Result<Vec<f64>> {
    let scale = params.alpha0() / (1.0 - params.explicit_mass());
    if scale == 0.0 {
        return Ok(alloc::vec![0.0; max_lag + 1]);
    }
    let tail_tol = crate::math::sqrt(tol / scale);
    let n = beta_expansion(params, tail_tol)?.betas.len() - 1;
    let beta = beta_coeffs(params, n + max_lag);
    Ok((0..=max_lag)
        .map(|j| scale * (0..=n).map(|k| beta[k] * beta[k + j]).sum::<f64>())
        .collect())
}

/// `u_n = X_n − Σ_k α_k X_{n−k} − α0` for every `n` with a full window of
/// `p` predecessors inside the series.
pub fn residuals(series: &CountSeries, params: &InarParams) -> Result<Vec<f64>> {
    let p = params.order();
    let x = &series.counts;
    if x.len() <= p {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            need: p + 1,
        });
    }
    let alphas = params.alphas();
    Ok((p..x.len())
        .map(|n| {
            let ar: f64 = alphas.iter().enumerate().map(|(i, a)| a * x[n - 1 - i] as f64).sum();
            x[n] as f64 - ar - params.alpha0()
        })
        .collect())
}

/// Keeps `α_1..α_p` and drops everything else, tail included. Asking for at
/// least as many coefficients as there are returns the parameters unchanged.
pub fn truncate(params: &InarParams, p: usize) -> InarParams {
    if p >= params.order() {
        return params.clone();
    }
    InarParams::new(params.alpha0(), params.alphas()[..p].to_vec())
        .and_then(|q| q.with_delta(params.delta()))
        .expect("a prefix of valid coefficients is valid")
}

/// Upper bound on `inar_mean(params) − inar_mean(truncate(params, p))`:
/// `α0·τ_p / (1 − K)²` with `τ_p = Σ_{k>p} α_k + tail_bound`.
pub fn truncation_mean_bound(params: &InarParams, p: usize) -> f64 {
    let k = params.reproduction_mean();
    let dropped: f64 = params.alphas().iter().skip(p).sum::<f64>() + params.tail_bound();
    params.alpha0() * dropped / ((1.0 - k) * (1.0 - k))
}

/// Smallest `p` whose [`truncation_mean_bound`] is below `tol`, if any.
pub fn truncation_order(params: &InarParams, tol: f64) -> Option<usize> {
    (0..=params.order()).find(|&p| truncation_mean_bound(params, p) < tol)
}
