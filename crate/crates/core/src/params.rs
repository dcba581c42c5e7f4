//! INAR(∞) parameters and the Δ-grid discretization of a Hawkes kernel.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::ReproductionKernel;
use crate::math;

/// Relative tail tolerance for the default truncation horizon.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Hard cap on the number of explicit reproduction coefficients.
pub const MAX_COEFFICIENTS: usize = 1_000_000;

/// Immigration parameter `α0`, explicit reproduction coefficients
/// `α_1..α_p`, and a bound on the mass of any dropped tail `Σ_{k>p} α_k`.
///
/// The reproduction mean `K = Σα_k + tail_bound` is strictly below 1.
/// Simulators only ever see the explicit coefficients.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InarParams {
    alpha0: f64,
    alphas: Vec<f64>,
    tail_bound: f64,
    delta: f64,
}

impl InarParams {
    pub fn new(alpha0: f64, alphas: Vec<f64>) -> Result<Self> {
        Self::with_tail(alpha0, alphas, 0.0)
    }

    pub fn with_tail(alpha0: f64, alphas: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if !math::nonneg(alpha0) {
            return Err(Error::InvalidParameter("alpha0 must be >= 0"));
        }
        if alphas.iter().any(|a| !math::nonneg(*a)) {
            return Err(Error::InvalidParameter("reproduction coefficients must be >= 0"));
        }
        if !math::nonneg(tail_bound) {
            return Err(Error::InvalidParameter("tail bound must be >= 0"));
        }
        let mass = alphas.iter().sum::<f64>() + tail_bound;
        if mass >= 1.0 {
            return Err(Error::Supercritical { mass });
        }
        Ok(Self {
            alpha0,
            alphas,
            tail_bound,
            delta: 1.0,
        })
    }

    /// Label the grid width the coefficients refer to (defaults to 1).
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !math::positive(delta) {
            return Err(Error::InvalidParameter("grid width must be > 0"));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// `α_1..α_p`; `alphas()[k - 1]` is `α_k`.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of explicit coefficients `p`.
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// `K = Σα_k + tail_bound`.
    pub fn reproduction_mean(&self) -> f64 {
        self.explicit_mass() + self.tail_bound
    }

    /// `Σ_{k≤p} α_k`, the reproduction mean the simulators realize.
    pub fn explicit_mass(&self) -> f64 {
        self.alphas.iter().sum()
    }
}

/// `α0 = Δη`, `α_k = Δ·h(kΔ)` for `kΔ ≤ horizon`, with the rest of the grid
/// sum carried in `tail_bound` (exactly, so `K` equals `K^(Δ)`).
///
/// Without a horizon, the smallest one is chosen whose dropped tail is below
/// `1e−10·K^(Δ)`; if that needs more than a million coefficients the call
/// fails with [`Error::TailTooHeavy`].
pub fn discretize(eta: f64, kernel: &ReproductionKernel, delta: f64, trunc_horizon: Option<f64>) -> Result<InarParams> {
    if !math::nonneg(eta) {
        return Err(Error::InvalidParameter("immigration intensity must be >= 0"));
    }
    let k_delta = kernel.k_delta(delta)?;
    let p = match trunc_horizon {
        Some(h) => {
            if !math::nonneg(h) {
                return Err(Error::InvalidParameter("truncation horizon must be >= 0"));
            }
            let p = math::grid_points_upto(h, delta);
            if p > MAX_COEFFICIENTS {
                return Err(Error::TailTooHeavy {
                    tail: kernel.grid_tail(delta, MAX_COEFFICIENTS),
                    cap: MAX_COEFFICIENTS,
                });
            }
            p
        }
        None => default_order(kernel, delta, k_delta)?,
    };
    let alphas: Vec<f64> = (1..=p).map(|k| delta * kernel.eval(k as f64 * delta)).collect();
    let tail = kernel.grid_tail(delta, p);
    InarParams::with_tail(delta * eta, alphas, tail)
        .map_err(|e| match e {
            Error::Supercritical { mass } => Error::DiscretizationSupercritical { k_delta: mass },
            other => other,
        })?
        .with_delta(delta)
}

fn default_order(kernel: &ReproductionKernel, delta: f64, k_delta: f64) -> Result<usize> {
    if k_delta == 0.0 {
        return Ok(0);
    }
    let target = DEFAULT_TAIL_TOL * k_delta;
    if let Some((_, b)) = kernel.as_exponential() {
        // Δa e^(−bΔp)/expm1(bΔ) < target  ⇔  p > ln(Δa/(expm1(bΔ)·target)) / (bΔ)
        let guess = math::ceil(math::log(kernel.grid_tail(delta, 0) / target) / (b * delta)).max(0.0);
        if guess > MAX_COEFFICIENTS as f64 {
            return Err(Error::TailTooHeavy {
                tail: kernel.grid_tail(delta, MAX_COEFFICIENTS),
                cap: MAX_COEFFICIENTS,
            });
        }
        let mut p = guess as usize;
        while p > 0 && kernel.grid_tail(delta, p - 1) < target {
            p -= 1;
        }
        while kernel.grid_tail(delta, p) >= target {
            p += 1;
        }
        return Ok(p);
    }
    // finite support: walk back from the last grid point inside the support
    let end = kernel.support_end().unwrap_or(0.0);
    let m = math::grid_points_upto(end, delta);
    if m > MAX_COEFFICIENTS {
        return Err(Error::TailTooHeavy {
            tail: kernel.grid_tail(delta, MAX_COEFFICIENTS),
            cap: MAX_COEFFICIENTS,
        });
    }
    let mut p = m;
    let mut tail = 0.0;
    while p > 0 {
        let next = tail + delta * kernel.eval(p as f64 * delta);
        if next >= target {
            break;
        }
        tail = next;
        p -= 1;
    }
    Ok(p)
}
