use alloc::vec::Vec;

use rand::Rng;

use super::moments::beta_expansion;
use super::{cumulative, draw_lag, poisson};
use crate::error::Result;
use crate::params::InarParams;
use crate::series::CountSeries;

/// Tail mass of β beyond the branching lookback.
pub const LOOKBACK_TAIL_TOL: f64 = 1e-6;

/// `max(1000, 50/(1 − K))` steps: the recursion forgets its zero start
/// geometrically at rate `K`.
pub fn default_burn_in(params: &InarParams) -> usize {
    let k = params.reproduction_mean();
    let geometric = libm::ceil(50.0 / (1.0 - k));
    (geometric as usize).max(1000)
}

/// Smallest `L` with `Σ_{k>L} β_k < 1e−6`.
pub fn default_lookback(params: &InarParams) -> Result<usize> {
    Ok(beta_expansion(params, LOOKBACK_TAIL_TOL)?.betas.len() - 1)
}

/// Runs `X_n = ε_n + Σ_k α_k∘X_{n−k}` forward from an all-zero history.
///
/// Given the past, `X_n` is Poisson with mean `α0 + Σ_k α_k X_{n−k}`, which is
/// how it is drawn. The first `burn_in` values (default
/// [`default_burn_in`]) are discarded; the result holds indices `1..=n_steps`.
pub fn simulate_inar<R: Rng + ?Sized>(
    params: &InarParams,
    n_steps: usize,
    burn_in: Option<usize>,
    rng: &mut R,
) -> CountSeries {
    let burn = burn_in.unwrap_or_else(|| default_burn_in(params));
    let alphas = params.alphas();
    let total = burn + n_steps;
    let mut x: Vec<u64> = Vec::with_capacity(total);
    for n in 0..total {
        let m = n.min(alphas.len());
        let lam = params.alpha0() + (1..=m).map(|k| alphas[k - 1] * x[n - k] as f64).sum::<f64>();
        x.push(poisson(rng, lam));
    }
    x.drain(..burn);
    CountSeries::new(params.delta(), 1, x).expect("params carry a valid grid width")
}

/// One family: the ancestor at step 0 and its descendants, per generation.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRealization {
    horizon: usize,
    per_generation: Vec<Vec<u64>>,
    family: Vec<u64>,
}

impl FamilyRealization {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `per_generation()[g][n]` is `G^(g)_n`, for `n = 0..=horizon`. Only
    /// generations with at least one member are listed.
    pub fn per_generation(&self) -> &[Vec<u64>] {
        &self.per_generation
    }

    /// `F_n = Σ_g G^(g)_n`.
    pub fn family(&self) -> &[u64] {
        &self.family
    }

    /// `S = Σ_n F_n`.
    pub fn total_size(&self) -> u64 {
        self.family.iter().sum()
    }

    /// `Y_g = Σ_n G^(g)_n`.
    pub fn generation_sizes(&self) -> Vec<u64> {
        self.per_generation.iter().map(|g| g.iter().sum()).collect()
    }
}

/// Grows one family on `0..=horizon`. Every member at step `n` has
/// Poisson(α_k) children at step `n + k`; children past the horizon are never
/// drawn. Stops at the first empty generation.
pub fn simulate_family<R: Rng + ?Sized>(params: &InarParams, horizon: usize, rng: &mut R) -> FamilyRealization {
    let alphas = params.alphas();
    let cum = cumulative(alphas);
    let mut current = alloc::vec![0u64; horizon + 1];
    current[0] = 1;
    let mut family = current.clone();
    let mut per_generation = Vec::new();
    loop {
        let mut next = alloc::vec![0u64; horizon + 1];
        let mut any = false;
        for (n, &c) in current.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let m = alphas.len().min(horizon - n);
            if m == 0 {
                continue;
            }
            let kids = poisson(rng, c as f64 * cum[m]);
            for _ in 0..kids {
                next[n + draw_lag(&cum, m, rng)] += 1;
                any = true;
            }
        }
        per_generation.push(current);
        if !any {
            break;
        }
        for (f, g) in family.iter_mut().zip(&next) {
            *f += g;
        }
        current = next;
    }
    FamilyRealization {
        horizon,
        per_generation,
        family,
    }
}

/// `X_1..X_{n_steps}` as the superposition of all families started by
/// Poisson(α0) immigrants at steps `1 − L..=n_steps`, `L = lookback`
/// (default [`default_lookback`]).
///
/// The families are grown together in one forward pass: by the time step `j`
/// is reached its count is final, and its members (of whatever generation)
/// place Poisson(α_k) children at `j + k`. Offspring of distinct members are
/// independent, so this has the law of independent families overlaid.
pub fn simulate_inar_branching<R: Rng + ?Sized>(
    params: &InarParams,
    n_steps: usize,
    lookback: Option<usize>,
    rng: &mut R,
) -> Result<CountSeries> {
    let lookback = match lookback {
        Some(l) => l,
        None => default_lookback(params)?,
    };
    let alphas = params.alphas();
    let cum = cumulative(alphas);
    let len = lookback + n_steps;
    let mut x: Vec<u64> = (0..len).map(|_| poisson(rng, params.alpha0())).collect();
    for j in 0..len {
        let m = alphas.len().min(len - 1 - j);
        if x[j] == 0 || m == 0 {
            continue;
        }
        let kids = poisson(rng, x[j] as f64 * cum[m]);
        for _ in 0..kids {
            x[j + draw_lag(&cum, m, rng)] += 1;
        }
    }
    x.drain(..lookback);
    CountSeries::new(params.delta(), 1, x)
}
