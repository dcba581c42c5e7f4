//! INAR(∞) processes: thinning, simulation in recursion and branching form,
//! exact second-order moments, residuals and the joint moment-generating
//! function.

mod mgf;
mod moments;
mod simulate;

pub use mgf::{family_mgf, mgf, FiniteSupportSeq};
pub use moments::{
    autocovariance, beta_coeffs, beta_expansion, inar_mean, residuals, truncate, truncation_mean_bound,
    truncation_order, BetaExpansion,
};
pub use simulate::{
    default_burn_in, default_lookback, simulate_family, simulate_inar, simulate_inar_branching, FamilyRealization,
};

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::math::{self, exp};

/// One Poisson(λ) draw; `λ = 0` gives 0 without touching the generator.
pub(crate) fn poisson<R: Rng + ?Sized>(rng: &mut R, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let d = Poisson::new(lambda).expect("Poisson rate is finite and positive");
    let x: f64 = d.sample(rng);
    x as u64
}

/// Poisson thinning `α∘y`: the sum of `y` i.i.d. Poisson(α) variables,
/// drawn as a single Poisson(αy).
pub fn thin<R: Rng + ?Sized>(alpha: f64, y: u64, rng: &mut R) -> Result<u64> {
    if !math::nonneg(alpha) {
        return Err(Error::InvalidParameter("thinning parameter must be >= 0"));
    }
    Ok(poisson(rng, alpha * y as f64))
}

/// Bernoulli thinning: Binomial(y, α).
pub fn thin_bernoulli<R: Rng + ?Sized>(alpha: f64, y: u64, rng: &mut R) -> Result<u64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidProbability(alpha));
    }
    if y == 0 || alpha == 0.0 {
        return Ok(0);
    }
    if alpha == 1.0 {
        return Ok(y);
    }
    let d = Binomial::new(y, alpha).expect("probability checked above");
    Ok(d.sample(rng))
}

/// Poisson(x) against Bernoulli(x) probabilities at one point, `x = Δα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PmfRatio {
    /// `P[Poisson = n] / P[Bernoulli = n]`.
    Ratio(f64),
    /// The Bernoulli law puts no mass on `n`; carries the Poisson pmf alone.
    PoissonOnly(f64),
}

impl PmfRatio {
    pub fn value(self) -> f64 {
        match self {
            PmfRatio::Ratio(v) | PmfRatio::PoissonOnly(v) => v,
        }
    }
}

/// Compares the Poisson and Bernoulli counting laws with mean `x = Δα`.
pub fn counting_pmf_ratio(alpha: f64, delta: f64, n: u64) -> Result<PmfRatio> {
    if !math::nonneg(alpha) || !math::positive(delta) {
        return Err(Error::InvalidParameter("need alpha >= 0 and delta > 0"));
    }
    let x = delta * alpha;
    if x > 1.0 {
        return Err(Error::InvalidProbability(x));
    }
    let pois = poisson_pmf(x, n);
    let bern = match n {
        0 => 1.0 - x,
        1 => x,
        _ => 0.0,
    };
    Ok(if bern > 0.0 {
        // n = 1 reduces to e^(−x); keep it exact
        if n == 1 {
            PmfRatio::Ratio(exp(-x))
        } else {
            PmfRatio::Ratio(pois / bern)
        }
    } else {
        PmfRatio::PoissonOnly(pois)
    })
}

fn poisson_pmf(x: f64, n: u64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_fact = libm::lgamma(n as f64 + 1.0);
    exp(n as f64 * libm::log(x) - x - log_fact)
}

/// Cumulative sums `[0, α_1, α_1+α_2, …]` for offspring-lag sampling.
pub(crate) fn cumulative(alphas: &[f64]) -> alloc::vec::Vec<f64> {
    let mut cum = alloc::vec::Vec::with_capacity(alphas.len() + 1);
    let mut s = 0.0;
    cum.push(0.0);
    for a in alphas {
        s += a;
        cum.push(s);
    }
    cum
}

/// A lag `k ∈ 1..=m` with probability `α_k / cum[m]`.
pub(crate) fn draw_lag<R: Rng + ?Sized>(cum: &[f64], m: usize, rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * cum[m];
    // first k with cum[k] > u
    let k = cum[..=m].partition_point(|&c| c <= u);
    k.clamp(1, m)
}
