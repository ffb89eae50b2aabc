use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::signals::MeasurementSet;

/// Relative diagonal threshold of `R` below which `A` counts as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Thin QR factorization `A = QR`, computed once and reused for every
/// least-squares solve `argmin ‖Ax − b‖`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl LeastSquares {
    pub fn new(a: &MeasurementSet) -> Result<Self> {
        let (m, d) = (a.m(), a.d());
        if m < d {
            return Err(Error::Singular(format!(
                "m = {m} < d = {d}: A has no full column rank"
            )));
        }
        let qr = a.entries().clone().qr();
        let r = qr.r();
        let q = qr.q();
        let diag: Vec<f64> = (0..d).map(|i| r[(i, i)].abs()).collect();
        let largest = diag.iter().cloned().fold(0.0, f64::max);
        let smallest = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(smallest > RANK_TOL * largest) {
            return Err(Error::Singular(format!(
                "A is rank deficient (min |R_ii| = {smallest:e}, max |R_ii| = {largest:e})"
            )));
        }
        Ok(LeastSquares { q, r })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let qtb = self.q.tr_mul(b);
        self.r
            .solve_upper_triangular(&qtb)
            .expect("R has a nonzero diagonal")
    }
}
