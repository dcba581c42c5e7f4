//! Hawkes processes: the cluster (branching) simulator, an independent
//! thinning simulator, the conditional intensity, binning onto the Δ-grid and
//! Monte Carlo Laplace functionals.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp1, OpenClosed01};

use crate::error::{Error, Result};
use crate::inar::poisson;
use crate::kernel::ReproductionKernel;
use crate::math::{self, exp, log};
use crate::series::{check_window, CountSeries, PointPattern, StepFunction};
use crate::stats::Estimate;

/// Expected number of window events the default lookback may miss.
pub const LOOKBACK_MISSED_EVENTS: f64 = 1e-3;

/// Immigration intensity `η > 0` and a subcritical reproduction kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct HawkesModel {
    eta: f64,
    kernel: ReproductionKernel,
}

impl HawkesModel {
    pub fn new(eta: f64, kernel: ReproductionKernel) -> Result<Self> {
        if !math::positive(eta) {
            return Err(Error::InvalidParameter("immigration intensity must be > 0"));
        }
        let mass = kernel.mass();
        if mass >= 1.0 {
            return Err(Error::MassNotSubcritical { mass });
        }
        Ok(Self { eta, kernel })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kernel(&self) -> &ReproductionKernel {
        &self.kernel
    }

    /// `η / (1 − K)`.
    pub fn mean_rate(&self) -> f64 {
        self.eta / (1.0 - self.kernel.mass())
    }

    /// A lookback `L` such that immigrants arriving before `a − L` have, in
    /// expectation, fewer than `1e−3` descendants after `a`.
    ///
    /// For any `θ` with `ĥ(θ) = ∫e^(θt)h(t)dt < 1`, the expected number of
    /// descendants of one immigrant displaced by more than `x` is at most
    /// `C(θ)e^(−θx)` with `C = ĥ/(1 − ĥ)`. Integrating over immigrants before
    /// `a − L` gives `η·C(θ)·e^(−θL)/θ`; `L` is the smallest value over a grid
    /// of admissible `θ`.
    pub fn default_lookback(&self) -> f64 {
        if self.kernel.mass() == 0.0 {
            return 0.0;
        }
        let theta_max = admissible_theta(&self.kernel);
        let mut best = f64::INFINITY;
        const GRID: usize = 400;
        for i in 1..GRID {
            let theta = theta_max * i as f64 / GRID as f64;
            let hat = self.kernel.exp_moment(theta);
            if !(hat < 1.0) {
                continue;
            }
            let c = hat / (1.0 - hat);
            let l = log(self.eta * c / (theta * LOOKBACK_MISSED_EVENTS)) / theta;
            best = best.min(l.max(0.0));
        }
        best
    }
}

/// The `θ*` at which `ĥ(θ*) = 1`, by bisection.
fn admissible_theta(kernel: &ReproductionKernel) -> f64 {
    let mut hi = 1.0;
    while kernel.exp_moment(hi) < 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kernel.exp_moment(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Where an event in a [`ClusterRealization`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Immigrant,
    /// Child of the event at this index of the same realization.
    Offspring(usize),
    /// Child of an event that happened before the window.
    OffspringOfUnobserved,
}

/// Window events of a cluster simulation with their genealogy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRealization {
    pattern: PointPattern,
    origins: Vec<Origin>,
    generations: Vec<u32>,
}

impl ClusterRealization {
    pub fn pattern(&self) -> &PointPattern {
        &self.pattern
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    /// 0 for immigrants, parent's generation plus one otherwise.
    pub fn generations(&self) -> &[u32] {
        &self.generations
    }

    pub fn into_pattern(self) -> PointPattern {
        self.pattern
    }
}

struct Event {
    time: f64,
    parent: Option<usize>,
    generation: u32,
}

/// Immigrants from a rate-`η` Poisson process on `(a − L, b]`, each event
/// spawning Poisson(K) children displaced by draws from `h/K`. Children after
/// `b` are dropped with their descendants; only events in `(a, b]` are kept.
pub fn simulate_hawkes_cluster<R: Rng + ?Sized>(
    model: &HawkesModel,
    window: (f64, f64),
    lookback: Option<f64>,
    rng: &mut R,
) -> Result<ClusterRealization> {
    check_window(window)?;
    let lookback = resolve_lookback(model, lookback)?;
    let (a, b) = window;
    let start = a - lookback;
    let n0 = poisson(rng, model.eta * (b - start));
    let mut events: Vec<Event> = (0..n0)
        .map(|_| {
            let u: f64 = rng.random();
            Event {
                // (start, b]
                time: b - u * (b - start),
                parent: None,
                generation: 0,
            }
        })
        .collect();
    let k = model.kernel.mass();
    let mut next = 0;
    while next < events.len() {
        let (t, g) = (events[next].time, events[next].generation);
        let kids = poisson(rng, k);
        for _ in 0..kids {
            let u: f64 = OpenClosed01.sample(rng);
            let child = t + model.kernel.displacement_quantile(u);
            if child <= b {
                events.push(Event {
                    time: child,
                    parent: Some(next),
                    generation: g + 1,
                });
            }
        }
        next += 1;
    }

    let mut kept: Vec<usize> = (0..events.len()).filter(|&i| events[i].time > a).collect();
    kept.sort_by(|&i, &j| events[i].time.total_cmp(&events[j].time).then(i.cmp(&j)));
    let mut position = alloc::vec![usize::MAX; events.len()];
    for (pos, &i) in kept.iter().enumerate() {
        position[i] = pos;
    }
    let origins = kept
        .iter()
        .map(|&i| match events[i].parent {
            None => Origin::Immigrant,
            Some(p) if position[p] != usize::MAX => Origin::Offspring(position[p]),
            Some(_) => Origin::OffspringOfUnobserved,
        })
        .collect();
    let generations = kept.iter().map(|&i| events[i].generation).collect();
    let times = kept.iter().map(|&i| events[i].time).collect();
    Ok(ClusterRealization {
        pattern: PointPattern::new(window, times)?,
        origins,
        generations,
    })
}

fn resolve_lookback(model: &HawkesModel, lookback: Option<f64>) -> Result<f64> {
    match lookback {
        Some(l) if math::nonneg(l) => Ok(l),
        Some(_) => Err(Error::InvalidParameter("lookback must be >= 0")),
        None => Ok(model.default_lookback()),
    }
}

/// Accept/reject simulation on the conditional intensity, started empty at
/// `a − L`. Between events the proposal rate is `η + Σ_s sup_{u>t−s} h(u)`,
/// which dominates `λ` until the next event; for the exponential kernel that
/// is just the current `λ`.
pub fn simulate_hawkes_thinning<R: Rng + ?Sized>(
    model: &HawkesModel,
    window: (f64, f64),
    lookback: Option<f64>,
    rng: &mut R,
) -> Result<PointPattern> {
    check_window(window)?;
    let lookback = resolve_lookback(model, lookback)?;
    let (a, b) = window;
    let eta = model.eta;
    let kernel = &model.kernel;
    let mut t = a - lookback;
    let mut out = Vec::new();

    if let Some((ka, kb)) = kernel.as_exponential() {
        // excitation Σ_s a·e^(−b(t−s)) at the current time
        let mut excite = 0.0;
        loop {
            let bound = eta + excite;
            let e: f64 = Exp1.sample(rng);
            let w = e / bound;
            t += w;
            if t > b {
                break;
            }
            excite *= exp(-kb * w);
            let u: f64 = rng.random();
            if u * bound < eta + excite {
                excite += ka;
                if t > a {
                    out.push(t);
                }
            }
        }
    } else {
        let end = kernel.support_end().unwrap_or(0.0);
        let mut history: VecDeque<f64> = VecDeque::new();
        loop {
            while history.front().is_some_and(|&s| t - s >= end) {
                history.pop_front();
            }
            let bound = eta + history.iter().map(|&s| kernel.sup_after(t - s)).sum::<f64>();
            let e: f64 = Exp1.sample(rng);
            t += e / bound;
            if t > b {
                break;
            }
            let lam = eta + history.iter().map(|&s| kernel.eval(t - s)).sum::<f64>();
            let u: f64 = rng.random();
            if u * bound < lam {
                history.push_back(t);
                if t > a {
                    out.push(t);
                }
            }
        }
    }
    PointPattern::new(window, out)
}

/// `λ(t) = η + Σ_{s<t} h(t − s)`.
pub fn intensity(model: &HawkesModel, pattern: &PointPattern, t: f64) -> f64 {
    let times = pattern.times();
    let before = times.partition_point(|&s| s < t);
    model.eta + times[..before].iter().map(|&s| model.kernel.eval(t - s)).sum::<f64>()
}

/// Event counts in the bins `((n−1)Δ, nΔ]` covering `window`. Both window ends
/// must be grid points; the series starts at the first bin's index `n`.
pub fn bin_counts(pattern: &PointPattern, delta: f64, window: (f64, f64)) -> Result<CountSeries> {
    check_window(window)?;
    if !math::positive(delta) {
        return Err(Error::InvalidParameter("grid width must be > 0"));
    }
    let misaligned = Error::MisalignedWindow {
        a: window.0,
        b: window.1,
        delta,
    };
    let (Some(n0), Some(n1)) = (math::grid_index(window.0, delta), math::grid_index(window.1, delta)) else {
        return Err(misaligned);
    };
    let mut counts = alloc::vec![0u64; (n1 - n0) as usize];
    for &t in pattern.times() {
        if !(t > window.0 && t <= window.1) {
            continue;
        }
        let n = bin_of(t, delta).clamp(n0 + 1, n1);
        counts[(n - n0 - 1) as usize] += 1;
    }
    CountSeries::new(delta, n0 + 1, counts)
}

/// The `n` with `(n−1)Δ < t ≤ nΔ`, evaluating grid points as `n as f64 * Δ`.
fn bin_of(t: f64, delta: f64) -> i64 {
    let mut n = math::ceil(t / delta) as i64;
    while ((n - 1) as f64) * delta >= t {
        n -= 1;
    }
    while (n as f64) * delta < t {
        n += 1;
    }
    n
}

/// Monte Carlo estimate of `E exp(−Σ_{events} f(t))` from independent
/// realizations. `f` must be supported inside every pattern's window.
pub fn laplace_mc(patterns: &[PointPattern], f: &StepFunction) -> Result<Estimate> {
    if patterns.is_empty() {
        return Err(Error::EmptySamples);
    }
    let (lo, hi) = f.support();
    if !f.is_zero() && patterns.iter().any(|p| lo < p.window().0 || hi > p.window().1) {
        return Err(Error::InvalidParameter(
            "test function must be supported inside the window",
        ));
    }
    let values: Vec<f64> = patterns
        .iter()
        .map(|p| exp(-p.times().iter().map(|&t| f.eval(t)).sum::<f64>()))
        .collect();
    Ok(Estimate::from_samples(&values))
}
