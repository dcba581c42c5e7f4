//! Reproduction kernels `h`.
//!
//! Kernels are closed families so that the total mass `K = ∫h`, the grid sum
//! `K^(Δ) = Δ Σ_{k≥1} h(kΔ)`, tail masses and displacement quantiles all have
//! exact forms:
//!
//! - `Exponential { a, b }`: `h(t) = a·e^(−bt)` for `t > 0`
//! - `Step { c, w }`: `h(t) = c` for `0 < t ≤ w`
//! - `Table { knots }`: piecewise linear through `(t_i, h_i)`, constant `h_1`
//!   on `(0, t_1]`, zero beyond the last knot
//!
//! Every family vanishes on `t ≤ 0`. A kernel may have mass `≥ 1`; whether that
//! is acceptable is decided where a stationary model is built.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, exp, expm1, sqrt};

/// Plain description of a kernel, as it appears in parameter documents:
/// `{"family": "exponential", "a": …, "b": …}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)
)]
pub enum KernelSpec {
    Exponential { a: f64, b: f64 },
    Step { c: f64, w: f64 },
    Table { knots: Vec<[f64; 2]> },
}

/// A validated reproduction kernel.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "KernelSpec", into = "KernelSpec")
)]
pub struct ReproductionKernel {
    shape: Shape,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Exponential { a: f64, b: f64 },
    Step { c: f64, w: f64 },
    Table(Table),
}

#[derive(Debug, Clone, PartialEq)]
struct Table {
    t: Vec<f64>,
    h: Vec<f64>,
    /// `cum[i]` = mass on `(0, t_i]`; `cum[0]` is the flat piece `h_1·t_1`.
    cum: Vec<f64>,
    /// `suffix_max[i]` = max of `h_i..h_n`.
    suffix_max: Vec<f64>,
}

impl ReproductionKernel {
    pub fn exponential(a: f64, b: f64) -> Result<Self> {
        if !math::nonneg(a) {
            return Err(Error::InvalidParameter("exponential kernel needs a >= 0"));
        }
        if !math::positive(b) {
            return Err(Error::InvalidParameter("exponential kernel needs b > 0"));
        }
        Ok(Self {
            shape: Shape::Exponential { a, b },
        })
    }

    pub fn step(c: f64, w: f64) -> Result<Self> {
        if !math::nonneg(c) {
            return Err(Error::InvalidParameter("step kernel needs c >= 0"));
        }
        if !math::positive(w) {
            return Err(Error::InvalidParameter("step kernel needs w > 0"));
        }
        Ok(Self {
            shape: Shape::Step { c, w },
        })
    }

    /// Piecewise-linear kernel through `knots` (strictly increasing, positive
    /// times; nonnegative heights).
    pub fn table(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidParameter("table kernel needs at least one knot"));
        }
        let mut prev = 0.0;
        for &(t, h) in knots {
            if !math::positive(t) || t <= prev {
                return Err(Error::InvalidParameter(
                    "table knot times must be positive and strictly increasing",
                ));
            }
            if !math::nonneg(h) {
                return Err(Error::InvalidParameter("table knot heights must be >= 0"));
            }
            prev = t;
        }
        let t: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let h: Vec<f64> = knots.iter().map(|k| k.1).collect();
        let mut cum = Vec::with_capacity(t.len());
        cum.push(h[0] * t[0]);
        for i in 1..t.len() {
            let last = cum[i - 1];
            cum.push(last + 0.5 * (h[i - 1] + h[i]) * (t[i] - t[i - 1]));
        }
        let mut suffix_max = h.clone();
        for i in (0..suffix_max.len().saturating_sub(1)).rev() {
            suffix_max[i] = suffix_max[i].max(suffix_max[i + 1]);
        }
        Ok(Self {
            shape: Shape::Table(Table { t, h, cum, suffix_max }),
        })
    }

    /// The identically-zero kernel (a Poisson process / i.i.d. Poisson counts).
    pub fn zero() -> Self {
        Self {
            shape: Shape::Exponential { a: 0.0, b: 1.0 },
        }
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec {
            KernelSpec::Exponential { a, b } => Self::exponential(*a, *b),
            KernelSpec::Step { c, w } => Self::step(*c, *w),
            KernelSpec::Table { knots } => {
                let knots: Vec<(f64, f64)> = knots.iter().map(|k| (k[0], k[1])).collect();
                Self::table(&knots)
            }
        }
    }

    pub fn spec(&self) -> KernelSpec {
        match &self.shape {
            Shape::Exponential { a, b } => KernelSpec::Exponential { a: *a, b: *b },
            Shape::Step { c, w } => KernelSpec::Step { c: *c, w: *w },
            Shape::Table(tab) => KernelSpec::Table {
                knots: tab.t.iter().zip(&tab.h).map(|(&t, &h)| [t, h]).collect(),
            },
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.shape {
            Shape::Exponential { .. } => "exponential",
            Shape::Step { .. } => "step",
            Shape::Table(_) => "table",
        }
    }

    /// True when the exponential fast paths apply (recursive intensity,
    /// closed-form grid tails).
    pub(crate) fn as_exponential(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Exponential { a, b } => Some((a, b)),
            _ => None,
        }
    }

    /// `h(t)`; exactly zero for `t ≤ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match &self.shape {
            Shape::Exponential { a, b } => a * exp(-b * t),
            Shape::Step { c, w } => {
                if t <= *w {
                    *c
                } else {
                    0.0
                }
            }
            Shape::Table(tab) => tab.eval(t),
        }
    }

    /// Total mass `K = ∫₀^∞ h(t) dt`.
    pub fn mass(&self) -> f64 {
        match &self.shape {
            Shape::Exponential { a, b } => a / b,
            Shape::Step { c, w } => c * w,
            Shape::Table(tab) => *tab.cum.last().unwrap(),
        }
    }

    /// `∫_x^∞ h(t) dt`.
    pub fn tail_mass(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.mass();
        }
        match &self.shape {
            Shape::Exponential { a, b } => a / b * exp(-b * x),
            Shape::Step { c, w } => c * (w - x).max(0.0),
            Shape::Table(tab) => tab.total() - tab.cdf_mass(x),
        }
    }

    /// Right end of the support; `None` when the support is unbounded.
    pub fn support_end(&self) -> Option<f64> {
        match &self.shape {
            Shape::Exponential { a, .. } if *a == 0.0 => Some(0.0),
            Shape::Exponential { .. } => None,
            Shape::Step { c, w } => Some(if *c == 0.0 { 0.0 } else { *w }),
            Shape::Table(tab) => Some(*tab.t.last().unwrap()),
        }
    }

    /// Points where `h` jumps (including the origin when `h(0+) > 0`).
    pub fn discontinuities(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.shape {
            Shape::Exponential { a, .. } => {
                if *a > 0.0 {
                    out.push(0.0);
                }
            }
            Shape::Step { c, w } => {
                if *c > 0.0 {
                    out.push(0.0);
                    out.push(*w);
                }
            }
            Shape::Table(tab) => {
                if tab.h[0] > 0.0 {
                    out.push(0.0);
                }
                let last = tab.h.len() - 1;
                if tab.h[last] > 0.0 {
                    out.push(tab.t[last]);
                }
            }
        }
        out
    }

    /// `sup_{u > x} h(u)`: a bound for `h` over everything after `x`.
    pub fn sup_after(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Exponential { a, b } => {
                if x <= 0.0 {
                    *a
                } else {
                    a * exp(-b * x)
                }
            }
            Shape::Step { c, w } => {
                if x < *w {
                    *c
                } else {
                    0.0
                }
            }
            Shape::Table(tab) => tab.sup_after(x),
        }
    }

    /// `K^(Δ) = Δ·Σ_{k≥1} h(kΔ)` without any subcriticality check.
    pub fn grid_mass(&self, delta: f64) -> f64 {
        match &self.shape {
            Shape::Exponential { a, b } => delta * a / expm1(b * delta),
            Shape::Step { c, w } => delta * c * math::grid_points_upto(*w, delta) as f64,
            Shape::Table(tab) => {
                let m = math::grid_points_upto(*tab.t.last().unwrap(), delta);
                delta * (1..=m).map(|k| tab.eval(k as f64 * delta)).sum::<f64>()
            }
        }
    }

    /// `K^(Δ)`; fails when the grid sum reaches 1 (Δ too coarse for `h`).
    pub fn k_delta(&self, delta: f64) -> Result<f64> {
        if !math::positive(delta) {
            return Err(Error::InvalidParameter("grid width must be > 0"));
        }
        let k = self.grid_mass(delta);
        if k >= 1.0 {
            return Err(Error::DiscretizationSupercritical { k_delta: k });
        }
        Ok(k)
    }

    /// `Δ·Σ_{k>p} h(kΔ)` exactly, for the grid tail dropped by a truncation at
    /// `p` coefficients.
    pub fn grid_tail(&self, delta: f64, p: usize) -> f64 {
        match &self.shape {
            Shape::Exponential { a, b } => delta * a * exp(-b * delta * p as f64) / expm1(b * delta),
            Shape::Step { c, w } => {
                let m = math::grid_points_upto(*w, delta);
                delta * c * m.saturating_sub(p) as f64
            }
            Shape::Table(tab) => {
                let m = math::grid_points_upto(*tab.t.last().unwrap(), delta);
                delta * (p + 1..=m).map(|k| tab.eval(k as f64 * delta)).sum::<f64>()
            }
        }
    }

    /// `∫₀^∞ e^(θt) h(t) dt` for `θ > 0`; `+∞` where it diverges.
    pub fn exp_moment(&self, theta: f64) -> f64 {
        match &self.shape {
            Shape::Exponential { a, b } => {
                if *a == 0.0 {
                    0.0
                } else if theta < *b {
                    a / (b - theta)
                } else {
                    f64::INFINITY
                }
            }
            Shape::Step { c, w } => c * expm1(theta * w) / theta,
            Shape::Table(tab) => tab.exp_moment(theta),
        }
    }

    /// Quantile of the displacement law with density `h/K`, at level
    /// `u ∈ (0, 1)`. The result lies in `(0, support_end]`.
    ///
    /// Panics if the kernel has zero mass.
    pub fn displacement_quantile(&self, u: f64) -> f64 {
        assert!(self.mass() > 0.0, "zero kernel has no displacement law");
        match &self.shape {
            Shape::Exponential { b, .. } => -libm::log1p(-u) / b,
            Shape::Step { w, .. } => w * u,
            Shape::Table(tab) => tab.quantile(u * tab.total()),
        }
    }
}

impl TryFrom<KernelSpec> for ReproductionKernel {
    type Error = Error;

    fn try_from(spec: KernelSpec) -> Result<Self> {
        Self::from_spec(&spec)
    }
}

impl From<ReproductionKernel> for KernelSpec {
    fn from(kernel: ReproductionKernel) -> Self {
        kernel.spec()
    }
}

impl Table {
    fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Index `i` of the segment `(t_{i-1}, t_i]` holding `t` (segment 0 is the
    /// flat piece on `(0, t_0]`).
    fn segment(&self, t: f64) -> usize {
        self.t.partition_point(|&ti| ti < t)
    }

    fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        if i == 0 {
            return self.h[0];
        }
        if i >= self.t.len() {
            return 0.0;
        }
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let (h0, h1) = (self.h[i - 1], self.h[i]);
        h0 + (h1 - h0) * (t - t0) / (t1 - t0)
    }

    /// Mass on `(0, x]`.
    fn cdf_mass(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let i = self.segment(x);
        if i == 0 {
            return self.h[0] * x;
        }
        if i >= self.t.len() {
            return self.total();
        }
        let t0 = self.t[i - 1];
        let hx = self.eval(x);
        self.cum[i - 1] + 0.5 * (self.h[i - 1] + hx) * (x - t0)
    }

    fn sup_after(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x < self.t[0] {
            return self.suffix_max[0];
        }
        if x >= self.t[n - 1] {
            return 0.0;
        }
        // x in [t_{i-1}, t_i): the open interval (x, ∞) sees h(x+) and knots i..
        let i = self.t.partition_point(|&ti| ti <= x);
        self.eval(x).max(self.suffix_max[i])
    }

    fn exp_moment(&self, theta: f64) -> f64 {
        // flat piece
        let mut total = self.h[0] * expm1(theta * self.t[0]) / theta;
        for i in 1..self.t.len() {
            let (x0, x1) = (self.t[i - 1], self.t[i]);
            let (h0, h1) = (self.h[i - 1], self.h[i]);
            let s = (h1 - h0) / (x1 - x0);
            let (e0, e1) = (exp(theta * x0), exp(theta * x1));
            // ∫ (h0 + s(t − x0)) e^(θt) dt over [x0, x1]
            let flat = h0 * (e1 - e0) / theta;
            let ramp = s * (((x1 - x0) / theta - 1.0 / (theta * theta)) * e1 + e0 / (theta * theta));
            total += flat + ramp;
        }
        total
    }

    /// Smallest `x` with mass on `(0, x]` equal to `m`.
    fn quantile(&self, m: f64) -> f64 {
        let m = m.clamp(0.0, self.total());
        let i = self.cum.partition_point(|&c| c < m);
        if i == 0 {
            return if self.h[0] > 0.0 { m / self.h[0] } else { self.t[0] };
        }
        let i = i.min(self.t.len() - 1);
        let (x0, x1) = (self.t[i - 1], self.t[i]);
        let (h0, h1) = (self.h[i - 1], self.h[i]);
        let s = (h1 - h0) / (x1 - x0);
        let r = m - self.cum[i - 1];
        // Solve h0·x + s·x²/2 = r on [0, x1 − x0], in cancellation-free form.
        let disc = (h0 * h0 + 2.0 * s * r).max(0.0);
        let denom = h0 + sqrt(disc);
        let x = if denom > 0.0 { 2.0 * r / denom } else { 0.0 };
        (x0 + x).min(x1)
    }
}
