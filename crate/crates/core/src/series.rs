//! Realizations: count series on a Δ-grid, point patterns in a window, and
//! grid step functions used as Laplace-functional arguments.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Nonnegative integer counts `X_{n0}, X_{n0+1}, …` on a grid of width `Δ`.
/// Value `X_n` belongs to time `nΔ`, i.e. to the bin `((n−1)Δ, nΔ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    delta: DeltaBits,
    pub start_index: i64,
    pub counts: Vec<u64>,
}

// f64 wrapper so CountSeries can be Eq (Δ is validated finite and positive).
#[derive(Debug, Clone, Copy, PartialEq)]
struct DeltaBits(f64);
impl Eq for DeltaBits {}

impl CountSeries {
    pub fn new(delta: f64, start_index: i64, counts: Vec<u64>) -> Result<Self> {
        if !math::positive(delta) {
            return Err(Error::InvalidParameter("grid width must be > 0"));
        }
        Ok(Self {
            delta: DeltaBits(delta),
            start_index,
            counts,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta.0
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(index, count)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.start_index + i as i64, c))
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }
}

/// Event times in a half-open window `(a, b]`, sorted, duplicates allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    window: (f64, f64),
    times: Vec<f64>,
}

impl PointPattern {
    /// Validates that `times` is sorted and inside `(a, b]`.
    pub fn new(window: (f64, f64), times: Vec<f64>) -> Result<Self> {
        check_window(window)?;
        if times.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidParameter("event times must be sorted"));
        }
        if times.iter().any(|&t| !(t > window.0 && t <= window.1)) {
            return Err(Error::InvalidParameter("event time outside the window"));
        }
        Ok(Self { window, times })
    }

    /// Sorts `times`; fails if any lies outside the window or is NaN.
    pub fn from_unsorted(window: (f64, f64), mut times: Vec<f64>) -> Result<Self> {
        if times.iter().any(|t| t.is_nan()) {
            return Err(Error::InvalidParameter("event time is NaN"));
        }
        times.sort_by(f64::total_cmp);
        Self::new(window, times)
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of events in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.times.partition_point(|&t| t <= a);
        let hi = self.times.partition_point(|&t| t <= b);
        hi.saturating_sub(lo)
    }
}

pub(crate) fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0.is_finite() && window.1.is_finite() && window.0 < window.1) {
        return Err(Error::InvalidParameter(
            "window must be a finite interval (a, b] with a < b",
        ));
    }
    Ok(())
}

/// Nonnegative step function: `levels[i]` on `(knots[i], knots[i+1]]`, zero
/// outside `(knots[0], knots[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    knots: Vec<f64>,
    levels: Vec<f64>,
}

impl StepFunction {
    pub fn new(knots: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if knots.len() != levels.len() + 1 || levels.is_empty() {
            return Err(Error::InvalidParameter(
                "step function needs len(knots) = len(levels) + 1 >= 2",
            ));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "step function knots must be finite and increasing",
            ));
        }
        if levels.iter().any(|l| !math::nonneg(*l)) {
            return Err(Error::InvalidParameter("step function levels must be >= 0"));
        }
        Ok(Self { knots, levels })
    }

    /// `level · 1_{(a, b]}`.
    pub fn indicator(a: f64, b: f64, level: f64) -> Result<Self> {
        Self::new(alloc::vec![a, b], alloc::vec![level])
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.support();
        if !(t > a && t <= b) {
            return 0.0;
        }
        let i = self.knots.partition_point(|&k| k < t);
        self.levels[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|&l| l == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pattern_validation() {
        assert!(PointPattern::new((0.0, 1.0), vec![0.1, 0.1, 1.0]).is_ok());
        assert!(PointPattern::new((0.0, 1.0), vec![0.0]).is_err());
        assert!(PointPattern::new((0.0, 1.0), vec![0.5, 0.2]).is_err());
        assert!(PointPattern::new((1.0, 1.0), vec![]).is_err());
        let p = PointPattern::from_unsorted((0.0, 1.0), vec![0.5, 0.2, 0.2]).unwrap();
        assert_eq!(p.times(), &[0.2, 0.2, 0.5]);
        assert_eq!(p.count_in(0.0, 0.2), 2);
        assert_eq!(p.count_in(0.2, 1.0), 1);
    }

    #[test]
    fn step_function_eval() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![0.5, 0.25]).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(1.5), 0.25);
        assert_eq!(f.eval(2.0), 0.25);
        assert_eq!(f.eval(2.1), 0.0);
        assert!(StepFunction::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(StepFunction::new(vec![1.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn count_series_indexing() {
        let s = CountSeries::new(0.1, 3, vec![1, 0, 2]).unwrap();
        let pairs: Vec<_> = s.indexed().collect();
        assert_eq!(pairs, vec![(3, 1), (4, 0), (5, 2)]);
        assert_eq!(s.total(), 3);
        assert!(CountSeries::new(0.0, 0, vec![]).is_err());
    }
}
