//! Float helpers backed by `libm` (core has no transcendental functions).

pub(crate) use libm::{ceil, exp, expm1, floor, log, sqrt};

/// `x` is a positive, finite real.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// `x` is a nonnegative, finite real.
pub(crate) fn nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// Number of grid points `k >= 1` with `k as f64 * delta <= t`, computed so it
/// agrees with evaluating a kernel literally at `k as f64 * delta`.
pub(crate) fn grid_points_upto(t: f64, delta: f64) -> usize {
    if t < delta {
        return 0;
    }
    let mut m = floor(t / delta) as usize;
    while ((m + 1) as f64) * delta <= t {
        m += 1;
    }
    while m > 0 && (m as f64) * delta > t {
        m -= 1;
    }
    m
}

/// `x / delta` if it is an integer up to rounding.
pub(crate) fn grid_index(x: f64, delta: f64) -> Option<i64> {
    let q = x / delta;
    let r = libm::round(q);
    if (q - r).abs() <= 1e-9 * r.abs().max(1.0) {
        Some(r as i64)
    } else {
        None
    }
}
