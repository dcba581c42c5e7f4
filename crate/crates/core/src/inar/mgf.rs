use alloc::vec::Vec;

use super::moments::beta_expansion;
use crate::error::{Error, Result};
use crate::math::{exp, expm1};
use crate::params::InarParams;

/// Argument `(t_0, …, t_d)` of a joint moment-generating function, zero past
/// index `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupportSeq {
    values: Vec<f64>,
}

impl FiniteSupportSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("sequence values must be finite"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Last index that may be nonzero; `None` for the empty sequence.
    pub fn support(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    fn check_nonpositive(&self) -> Result<()> {
        match self.values.iter().position(|&v| v > 0.0) {
            Some(index) => Err(Error::UnsupportedArgument {
                index,
                value: self.values[index],
            }),
            None => Ok(()),
        }
    }

    fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

/// `M_X(t) = E exp(Σ_n t_n X_n)` for `t ≤ 0`.
///
/// Write `m(j) = M_F(t shifted by j) − 1` for a family started at step `j`.
/// It vanishes for `j > d` and otherwise satisfies
/// `m(j) = expm1(t_j + Σ_k α_k m(j + k))`, so it is filled in from `j = d`
/// downwards. Then `log M_X = α0 Σ_{j≤d} m(j)`. Families started before step
/// `−J` contribute at most `α0·‖t‖₁·Σ_{k>J} β_k` to the exponent, and `J` is
/// the first index where that drops below `tol`.
pub fn mgf(params: &InarParams, t: &FiniteSupportSeq, tol: f64) -> Result<f64> {
    t.check_nonpositive()?;
    let Some(d) = t.support() else {
        return Ok(1.0);
    };
    let weight = params.alpha0() * t.l1();
    if weight == 0.0 {
        return Ok(1.0);
    }
    let back = beta_expansion(params, tol / weight)?.betas.len() - 1;
    let m = shifted_family_terms(params, t.values(), d, back);
    let sum: f64 = m.iter().sum();
    Ok(exp(params.alpha0() * sum))
}

/// `M_F(t) = E exp(Σ_n t_n F_n)` for one family with its ancestor at step 0.
pub fn family_mgf(params: &InarParams, t: &FiniteSupportSeq) -> Result<f64> {
    t.check_nonpositive()?;
    let Some(d) = t.support() else {
        return Ok(1.0);
    };
    let m = shifted_family_terms(params, t.values(), d, 0);
    Ok(1.0 + m[0])
}

/// `m(j)` for `j = −back..=d`, stored at offset `j + back`.
fn shifted_family_terms(params: &InarParams, t: &[f64], d: usize, back: usize) -> Vec<f64> {
    let alphas = params.alphas();
    let len = back + d + 1;
    let mut m = alloc::vec![0.0; len];
    for idx in (0..len).rev() {
        let j = idx as i64 - back as i64;
        let tj = if j >= 0 { t[j as usize] } else { 0.0 };
        let reach = alphas.len().min(len - 1 - idx);
        let s: f64 = (1..=reach).map(|k| alphas[k - 1] * m[idx + k]).sum();
        m[idx] = expm1(tj + s);
    }
    m
}
