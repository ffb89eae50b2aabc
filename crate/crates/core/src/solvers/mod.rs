//! Estimators for the phaseless and linear models.
//!
//! All objectives are reported unnormalized: `‖|Ax| − y‖²` (or `‖Ax − y‖²`),
//! plus `λ‖x‖₁` for the regularized variants. Gradient steps work on the
//! `1/m`-scaled loss internally.

mod error_reduction;
mod gradient;
mod linear;
mod lsq;
mod spectral;

pub use error_reduction::{error_reduction, fixed_point_residual};
pub use gradient::{
    amplitude_gradient, amplitude_loss_gradient, constrained_lasso_solve,
    regularized_lasso_solve, Loss,
};
pub use linear::{compute_lambda, compute_lambda_conjecture, linear_least_squares};
pub use lsq::LeastSquares;
pub use spectral::spectral_init;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::sign;
use crate::rng::{derive_seed, tag, Stream};
use crate::signals::MeasurementSet;

/// Gradient step size.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// Start at 0.4 and halve on any objective increase.
    Auto,
    /// Fixed step, no backtracking.
    Fixed(f64),
}

pub const AUTO_STEP: f64 = 0.4;

#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    Spectral,
    Random,
    Given(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the relative objective decrease falls below this.
    pub tol: f64,
    pub step: Step,
    /// Independent initializations; the first uses `init`, the rest are random.
    pub restarts: usize,
    pub init: Init,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 1000,
            tol: 1e-10,
            step: Step::Auto,
            restarts: 1,
            init: Init::Spectral,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidDimension {
                what: "max_iters",
                value: 0,
            });
        }
        if self.restarts == 0 {
            return Err(Error::InvalidDimension {
                what: "restarts",
                value: 0,
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", self.tol, "must be positive"));
        }
        if let Step::Fixed(mu) = self.step {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::param("step", mu, "must be positive and finite"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult {
    pub x_hat: Vec<f64>,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
    pub fixed_point_residual: f64,
    pub restart_index: usize,
}

/// Objective values at or below this fraction of `1 + ‖y‖²` count as an exact fit.
const EXACT_FIT: f64 = 1e-30;

pub(crate) fn exact_fit_floor(y: &DVector<f64>) -> f64 {
    EXACT_FIT * (1.0 + y.norm_squared())
}

pub(crate) fn check_y(a: &MeasurementSet, y: &[f64]) -> Result<DVector<f64>> {
    if y.len() != a.m() {
        return Err(Error::DimensionMismatch {
            what: "y length vs matrix rows (m)",
            expected: a.m(),
            found: y.len(),
        });
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::param("y", *v, "measurements must be finite"));
    }
    Ok(DVector::from_column_slice(y))
}

/// `‖|Ax| − y‖²` given `Ax`.
pub(crate) fn amplitude_objective(ax: &DVector<f64>, y: &DVector<f64>) -> f64 {
    ax.iter().zip(y.iter()).map(|(p, q)| (p.abs() - q).powi(2)).sum()
}

/// `y ⊙ sign(Ax)`
pub(crate) fn signed_targets(ax: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(y.len(), ax.iter().zip(y.iter()).map(|(p, q)| q * sign(*p)))
}

pub(crate) fn l1(x: &DVector<f64>) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Starting point for restart `k`. Restart 0 honours `config.init`; later
/// restarts draw a Gaussian direction scaled to the spectral norm estimate.
pub(crate) fn initial_point(
    a: &MeasurementSet,
    y: &DVector<f64>,
    config: &SolverConfig,
    k: usize,
) -> Result<DVector<f64>> {
    let d = a.d();
    match (&config.init, k) {
        (Init::Given(x), 0) => {
            if x.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "initial point length vs d",
                    expected: d,
                    found: x.len(),
                });
            }
            Ok(DVector::from_column_slice(x))
        }
        (Init::Spectral, 0) => Ok(DVector::from_vec(spectral_init(
            a,
            y.as_slice(),
            derive_seed(config.seed, tag::SOLVER, 0),
        )?)),
        _ => {
            let mut stream = Stream::new(derive_seed(config.seed, tag::RESTART, k as u64));
            let v = DVector::from_vec(stream.normals(d));
            let n = v.norm();
            let scale = spectral::norm_estimate(y);
            if n == 0.0 || scale == 0.0 {
                return Ok(DVector::zeros(d));
            }
            Ok(v * (scale / n))
        }
    }
}

/// Keeps the best of several restarts: lowest objective, earliest index on ties.
pub(crate) fn best_of(results: Vec<SolverResult>) -> SolverResult {
    let mut best: Option<SolverResult> = None;
    for r in results {
        match &best {
            Some(b) if !(r.objective < b.objective) => {}
            _ => best = Some(r),
        }
    }
    best.expect("at least one restart")
}
