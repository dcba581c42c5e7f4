//! The Δ → 0 harness: build the approximating INAR process of a Hawkes model,
//! check its moment identities, and compare window-count laws across a sweep
//! of grid widths.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hawkes::{bin_counts, simulate_hawkes_cluster, HawkesModel};
use crate::inar::{autocovariance, default_lookback, inar_mean, mgf, simulate_inar_branching, FiniteSupportSeq};
use crate::math;
use crate::params::{discretize, InarParams};
use crate::rng::RngStream;
use crate::series::{check_window, StepFunction};
use crate::stats;

/// Default test windows for the sweep.
pub const DEFAULT_WINDOWS: [(f64, f64); 2] = [(0.0, 1.0), (1.0, 2.0)];
/// Default replicates per side and grid width.
pub const DEFAULT_REPS: usize = 10_000;
/// Bootstrap resamples behind each W1 standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// `α0 = Δη`, `α_k = Δh(kΔ)`; see [`discretize`].
pub fn build_approx(model: &HawkesModel, delta: f64, trunc_horizon: Option<f64>) -> Result<InarParams> {
    discretize(model.eta(), model.kernel(), delta, trunc_horizon)
}

/// `|Δ⁻¹·E X − η/(1 − K)|` from the two closed-form means.
pub fn mean_rate_gap(model: &HawkesModel, params: &InarParams) -> f64 {
    (inar_mean(params) / params.delta() - model.mean_rate()).abs()
}

/// Wasserstein-1 distance between two empirical laws on the integers,
/// `Σ_k |F_a(k) − F_b(k)|`.
pub fn count_distribution_distance(a: &[u64], b: &[u64]) -> Result<f64> {
    let pooled = Pooled::new(a, b)?;
    Ok(pooled.w1(&pooled.hist(&pooled.ia), &pooled.hist(&pooled.ib)))
}

/// Bootstrap standard error of [`count_distribution_distance`], resampling
/// both samples independently.
pub fn w1_bootstrap_se<R: Rng + ?Sized>(a: &[u64], b: &[u64], resamples: usize, rng: &mut R) -> Result<f64> {
    let pooled = Pooled::new(a, b)?;
    let mut ha = alloc::vec![0u64; pooled.support.len()];
    let mut hb = ha.clone();
    let draws: Vec<f64> = (0..resamples)
        .map(|_| {
            ha.iter_mut().chain(hb.iter_mut()).for_each(|c| *c = 0);
            for _ in 0..pooled.ia.len() {
                ha[pooled.ia[rng.random_range(0..pooled.ia.len())]] += 1;
            }
            for _ in 0..pooled.ib.len() {
                hb[pooled.ib[rng.random_range(0..pooled.ib.len())]] += 1;
            }
            pooled.w1(&ha, &hb)
        })
        .collect();
    Ok(math::sqrt(stats::variance(&draws)))
}

/// Both samples mapped onto their joint sorted support.
struct Pooled {
    support: Vec<u64>,
    ia: Vec<usize>,
    ib: Vec<usize>,
}

impl Pooled {
    fn new(a: &[u64], b: &[u64]) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut support: Vec<u64> = a.iter().chain(b).copied().collect();
        support.sort_unstable();
        support.dedup();
        let index = |xs: &[u64]| xs.iter().map(|x| support.binary_search(x).unwrap()).collect();
        let (ia, ib) = (index(a), index(b));
        Ok(Self { support, ia, ib })
    }

    fn hist(&self, idx: &[usize]) -> Vec<u64> {
        let mut h = alloc::vec![0u64; self.support.len()];
        idx.iter().for_each(|&i| h[i] += 1);
        h
    }

    fn w1(&self, ha: &[u64], hb: &[u64]) -> f64 {
        let (na, nb) = (self.ia.len() as f64, self.ib.len() as f64);
        let (mut ca, mut cb, mut w) = (0u64, 0u64, 0.0);
        for i in 0..self.support.len() - 1 {
            ca += ha[i];
            cb += hb[i];
            let gap = (self.support[i + 1] - self.support[i]) as f64;
            w += (ca as f64 / na - cb as f64 / nb).abs() * gap;
        }
        w
    }
}

/// One row of a [`ConvergenceReport`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRow {
    pub delta: f64,
    pub k_delta: f64,
    /// Closed-form `|Δ⁻¹E X − η/(1 − K)|`.
    pub mean_gap: f64,
    pub w1_window1: f64,
    pub w1_window2: f64,
    /// `|Var_Hawkes − Var_INAR|` of the first window's count, both empirical.
    pub var_gap: f64,
    pub reps: usize,
    pub w1_window1_se: f64,
    pub w1_window2_se: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Window counts of one replicate: Hawkes side, then INAR side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDraw {
    pub hawkes: [u64; 2],
    pub inar: [u64; 2],
}

#[derive(Debug, Clone)]
struct GridSetup {
    params: InarParams,
    k_delta: f64,
    lookback: usize,
    n_steps: usize,
    /// Half-open ranges of series positions summed for each window.
    ranges: [(usize, usize); 2],
}

/// Everything a sweep needs, fixed up front so replicates can run in any
/// order (or in parallel) and still be reproducible.
///
/// Replicate `r` at grid `d` draws from `stream.substream(d).substream(r)`;
/// the bootstrap for grid `d` uses `stream.substream(d).substream(u64::MAX)`.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    model: HawkesModel,
    windows: [(f64, f64); 2],
    span: (f64, f64),
    reps: usize,
    hawkes_lookback: f64,
    grids: Vec<GridSetup>,
}

impl SweepPlan {
    /// Every window end must lie on every grid; INAR sides use the default
    /// branching lookback, Hawkes sides the model's default lookback.
    pub fn new(model: &HawkesModel, deltas: &[f64], windows: [(f64, f64); 2], reps: usize) -> Result<Self> {
        if reps == 0 {
            return Err(Error::InvalidParameter("need at least one replicate"));
        }
        for w in &windows {
            check_window(*w)?;
        }
        let span = (windows[0].0.min(windows[1].0), windows[0].1.max(windows[1].1));
        let grids = deltas
            .iter()
            .map(|&delta| {
                let params = build_approx(model, delta, None)?;
                let idx = |x: f64, w: (f64, f64)| {
                    math::grid_index(x, delta).ok_or(Error::MisalignedWindow { a: w.0, b: w.1, delta })
                };
                let start = idx(span.0, span)?;
                let end = idx(span.1, span)?;
                let mut ranges = [(0, 0); 2];
                for (r, w) in ranges.iter_mut().zip(&windows) {
                    *r = ((idx(w.0, *w)? - start) as usize, (idx(w.1, *w)? - start) as usize);
                }
                Ok(GridSetup {
                    k_delta: params.reproduction_mean(),
                    lookback: default_lookback(&params)?,
                    n_steps: (end - start) as usize,
                    params,
                    ranges,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model: model.clone(),
            windows,
            span,
            reps,
            hawkes_lookback: model.default_lookback(),
            grids,
        })
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn grid_count(&self) -> usize {
        self.grids.len()
    }

    pub fn windows(&self) -> [(f64, f64); 2] {
        self.windows
    }

    pub fn params(&self, grid: usize) -> &InarParams {
        &self.grids[grid].params
    }

    /// Hawkes bin counts and INAR counts summed over each window.
    pub fn replicate(&self, grid: usize, rep: usize, stream: RngStream) -> Result<PairDraw> {
        let g = &self.grids[grid];
        let mut rng = stream.substream(grid as u64).substream(rep as u64).rng();
        let path = simulate_hawkes_cluster(&self.model, self.span, Some(self.hawkes_lookback), &mut rng)?;
        let bins = bin_counts(path.pattern(), g.params.delta(), self.span)?;
        let series = simulate_inar_branching(&g.params, g.n_steps, Some(g.lookback), &mut rng)?;
        let sum = |c: &[u64], (lo, hi): (usize, usize)| c[lo..hi].iter().sum::<u64>();
        Ok(PairDraw {
            hawkes: [sum(&bins.counts, g.ranges[0]), sum(&bins.counts, g.ranges[1])],
            inar: [sum(&series.counts, g.ranges[0]), sum(&series.counts, g.ranges[1])],
        })
    }

    /// Reduces the replicates of one grid width to a report row.
    pub fn assemble(&self, grid: usize, draws: &[PairDraw], stream: RngStream) -> Result<ConvergenceRow> {
        let g = &self.grids[grid];
        let side = |f: fn(&PairDraw) -> u64| draws.iter().map(f).collect::<Vec<u64>>();
        let (h1, h2) = (side(|d| d.hawkes[0]), side(|d| d.hawkes[1]));
        let (i1, i2) = (side(|d| d.inar[0]), side(|d| d.inar[1]));
        let mut rng = stream.substream(grid as u64).substream(u64::MAX).rng();
        let as_f64 = |xs: &[u64]| xs.iter().map(|&x| x as f64).collect::<Vec<f64>>();
        Ok(ConvergenceRow {
            delta: g.params.delta(),
            k_delta: g.k_delta,
            mean_gap: mean_rate_gap(&self.model, &g.params),
            w1_window1: count_distribution_distance(&h1, &i1)?,
            w1_window2: count_distribution_distance(&h2, &i2)?,
            var_gap: (stats::variance(&as_f64(&h1)) - stats::variance(&as_f64(&i1))).abs(),
            reps: draws.len(),
            w1_window1_se: w1_bootstrap_se(&h1, &i1, BOOTSTRAP_RESAMPLES, &mut rng)?,
            w1_window2_se: w1_bootstrap_se(&h2, &i2, BOOTSTRAP_RESAMPLES, &mut rng)?,
        })
    }
}

/// Runs a plan one replicate at a time.
pub fn convergence_sweep(plan: &SweepPlan, stream: RngStream) -> Result<ConvergenceReport> {
    let rows = (0..plan.grid_count())
        .map(|g| {
            let draws = (0..plan.reps)
                .map(|r| plan.replicate(g, r, stream))
                .collect::<Result<Vec<_>>>()?;
            plan.assemble(g, &draws, stream)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { rows })
}

/// `max_{1≤n≤max_lag} |R(n) − Σ_k α_k R(|n − k|)|`.
pub fn yule_walker_residual(params: &InarParams, max_lag: usize, tol: f64) -> Result<f64> {
    let alphas = params.alphas();
    let r = autocovariance(params, max_lag.max(alphas.len()), tol)?;
    Ok((1..=max_lag)
        .map(|n| {
            let rhs: f64 = alphas
                .iter()
                .enumerate()
                .map(|(i, a)| a * r[(n as i64 - i as i64 - 1).unsigned_abs() as usize])
                .sum();
            (r[n] - rhs).abs()
        })
        .fold(0.0, f64::max))
}

/// `|R^(Δ)(0) − η/(Δ(1 − K^(Δ))) − Σ_k Δh(kΔ) R^(Δ)(k)|` with
/// `R^(Δ)(n) = R(n)/Δ²` and `α_k = Δh(kΔ)` read from `params`.
pub fn variance_identity_residual(params: &InarParams, eta: f64, delta: f64, tol: f64) -> Result<f64> {
    if !math::positive(delta) {
        return Err(Error::InvalidParameter("grid width must be > 0"));
    }
    let alphas = params.alphas();
    let r = autocovariance(params, alphas.len(), tol)?;
    let d2 = delta * delta;
    let lhs = r[0] / d2;
    let rhs = eta / (delta * (1.0 - params.reproduction_mean()))
        + alphas.iter().enumerate().map(|(i, a)| a * r[i + 1] / d2).sum::<f64>();
    Ok((lhs - rhs).abs())
}

/// Laplace functional of `N^(Δ)` at `f`: the INAR mgf with `t_n = −f(nΔ)` over
/// the grid points in the support of `f`.
pub fn approx_laplace(params: &InarParams, f: &StepFunction, tol: f64) -> Result<f64> {
    let delta = params.delta();
    let (lo, hi) = f.support();
    let mut first = math::floor(lo / delta) as i64;
    while (first as f64) * delta <= lo {
        first += 1;
    }
    let mut last = math::floor(hi / delta) as i64 + 1;
    while (last as f64) * delta > hi {
        last -= 1;
    }
    let t: Vec<f64> = (first..=last).map(|n| -f.eval(n as f64 * delta)).collect();
    mgf(params, &FiniteSupportSeq::new(t)?, tol)
}
