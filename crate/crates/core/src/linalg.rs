//! Dense symmetric positive-definite solve for the normal equations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Lower Cholesky factor of a symmetric matrix stored row-major, `n × n`.
pub(crate) struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Fails with [`Error::SingularDesign`] when a pivot falls below
    /// `rel_tol` times the largest diagonal entry.
    pub(crate) fn new(a: &[f64], n: usize, rel_tol: f64) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::SingularDesign);
        }
        let mut l = alloc::vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > rel_tol * scale) {
                return Err(Error::SingularDesign);
            }
            let djj = sqrt(d);
            l[j * n + j] = djj;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Self { n, l })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }

    /// Diagonal of the inverse, column by column.
    pub(crate) fn inverse_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        let mut e = alloc::vec![0.0; n];
        (0..n)
            .map(|i| {
                e.iter_mut().for_each(|x| *x = 0.0);
                e[i] = 1.0;
                self.solve(&e)[i]
            })
            .collect()
    }
}
