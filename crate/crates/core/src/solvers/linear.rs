use nalgebra::DVector;

use super::lsq::LeastSquares;
use super::{check_y, SolverResult};
use crate::error::{Error, Result};
use crate::signals::MeasurementSet;

/// Exact minimizer of `‖Ax − y‖²` through a thin QR factorization.
pub fn linear_least_squares(a: &MeasurementSet, y: &[f64]) -> Result<SolverResult> {
    let yv = check_y(a, y)?;
    let ls = LeastSquares::new(a)?;
    let x = ls.solve(&yv);
    let objective = (a.entries() * &x - &yv).norm_squared();
    Ok(SolverResult {
        x_hat: x.as_slice().to_vec(),
        iterations: 1,
        objective,
        converged: true,
        fixed_point_residual: 0.0,
        restart_index: 0,
    })
}

/// `c·(‖η‖₁ + ‖η‖₂·√(ln d))`.
pub fn compute_lambda(eta: &[f64], d: usize, c: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::param("d", d as f64, "lambda rule needs d >= 2 (log d)"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", c, "must be positive and finite"));
    }
    let eta = DVector::from_column_slice(eta);
    let l1: f64 = eta.iter().map(|v| v.abs()).sum();
    Ok(c * (l1 + eta.norm() * (d as f64).ln().sqrt()))
}

/// `c·‖η‖₂·√(ln d)`, the penalty level without the ℓ1 term.
pub fn compute_lambda_conjecture(eta: &[f64], d: usize, c: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::param("d", d as f64, "lambda rule needs d >= 2 (log d)"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", c, "must be positive and finite"));
    }
    Ok(c * DVector::from_column_slice(eta).norm() * (d as f64).ln().sqrt())
}
