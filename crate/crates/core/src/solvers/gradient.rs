//! (Sub)gradient, projected-gradient and proximal-gradient solvers.
//!
//! One loop serves all three: a gradient step on the `1/m`-scaled loss,
//! followed by the identity, the ℓ1-ball projection, or soft thresholding at
//! `μλ/m`. With [`Step::Auto`] a step that would raise the objective is halved
//! and retried, so accepted iterates are monotone.

use nalgebra::DVector;

use super::lsq::LeastSquares;
use super::{
    amplitude_objective, best_of, check_y, exact_fit_floor, initial_point, l1, signed_targets,
    SolverConfig, SolverResult, Step, AUTO_STEP,
};
use crate::error::{Error, Result};
use crate::geometry::{project_l1_ball, sparse::shrink};
use crate::signals::MeasurementSet;

/// Step halvings tried before declaring the iterate stationary.
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loss {
    /// `‖|Ax| − y‖²`
    Amplitude,
    /// `‖Ax − y‖²`
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Penalty {
    None,
    Ball(f64),
    L1(f64),
}

struct Problem<'a> {
    a: &'a MeasurementSet,
    y: DVector<f64>,
    loss: Loss,
    penalty: Penalty,
}

impl Problem<'_> {
    fn residual(&self, ax: &DVector<f64>) -> DVector<f64> {
        match self.loss {
            Loss::Amplitude => ax - signed_targets(ax, &self.y),
            Loss::Linear => ax - &self.y,
        }
    }

    fn loss_at(&self, ax: &DVector<f64>) -> f64 {
        match self.loss {
            Loss::Amplitude => amplitude_objective(ax, &self.y),
            Loss::Linear => (ax - &self.y).norm_squared(),
        }
    }

    fn objective(&self, x: &DVector<f64>) -> f64 {
        let ax = self.a.entries() * x;
        let base = self.loss_at(&ax);
        match self.penalty {
            Penalty::L1(lambda) => base + lambda * l1(x),
            _ => base,
        }
    }

    /// Gradient of `loss/m`.
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let ax = self.a.entries() * x;
        self.a.entries().tr_mul(&self.residual(&ax)) * (2.0 / self.a.m() as f64)
    }

    fn prox(&self, v: DVector<f64>, mu: f64) -> DVector<f64> {
        match self.penalty {
            Penalty::None => v,
            Penalty::Ball(r) => DVector::from_vec(
                project_l1_ball(v.as_slice(), r).expect("radius validated"),
            ),
            Penalty::L1(lambda) => {
                DVector::from_vec(shrink(v.as_slice(), mu * lambda / self.a.m() as f64))
            }
        }
    }

    fn feasible_start(&self, x: DVector<f64>) -> DVector<f64> {
        match self.penalty {
            Penalty::Ball(_) => self.prox(x, 0.0),
            _ => x,
        }
    }

    fn floor(&self) -> f64 {
        exact_fit_floor(&self.y)
    }
}

/// Gradient of `‖|Ax| − y‖²/m`, using `sign(0) = +1` on the kink set.
pub fn amplitude_loss_gradient(a: &MeasurementSet, y: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let yv = check_y(a, y)?;
    check_x(a, x)?;
    let p = Problem {
        a,
        y: yv,
        loss: Loss::Amplitude,
        penalty: Penalty::None,
    };
    Ok(p.gradient(&DVector::from_column_slice(x)).as_slice().to_vec())
}

fn check_x(a: &MeasurementSet, x: &[f64]) -> Result<()> {
    if x.len() != a.d() {
        return Err(Error::DimensionMismatch {
            what: "x length vs d",
            expected: a.d(),
            found: x.len(),
        });
    }
    Ok(())
}

/// Plain gradient iteration `x ← x − μ·2Aᵀ(Ax − y ⊙ sign(Ax))/m` on the amplitude loss.
pub fn amplitude_gradient(a: &MeasurementSet, y: &[f64], config: &SolverConfig) -> Result<SolverResult> {
    solve(a, y, Loss::Amplitude, Penalty::None, config, |_, _| {})
}

/// Projected gradient for `min loss(x)` subject to `‖x‖₁ ≤ R`.
pub fn constrained_lasso_solve(
    a: &MeasurementSet,
    y: &[f64],
    radius: f64,
    loss: Loss,
    config: &SolverConfig,
) -> Result<SolverResult> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::param("R", radius, "l1 radius must be finite and nonnegative"));
    }
    solve(a, y, loss, Penalty::Ball(radius), config, |_, _| {})
}

/// Proximal gradient for `min loss(x) + λ‖x‖₁`.
pub fn regularized_lasso_solve(
    a: &MeasurementSet,
    y: &[f64],
    lambda: f64,
    loss: Loss,
    config: &SolverConfig,
) -> Result<SolverResult> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", lambda, "must be finite and nonnegative"));
    }
    solve(a, y, loss, Penalty::L1(lambda), config, |_, _| {})
}

fn solve(
    a: &MeasurementSet,
    y: &[f64],
    loss: Loss,
    penalty: Penalty,
    config: &SolverConfig,
    mut trace: impl FnMut(usize, &DVector<f64>),
) -> Result<SolverResult> {
    config.validate()?;
    let yv = check_y(a, y)?;
    let problem = Problem {
        a,
        y: yv,
        loss,
        penalty,
    };
    let floor = problem.floor();
    let (mu0, backtrack) = match config.step {
        Step::Auto => (AUTO_STEP, true),
        Step::Fixed(mu) => (mu, false),
    };
    let mut results = Vec::with_capacity(config.restarts);
    for k in 0..config.restarts {
        let mut x = problem.feasible_start(initial_point(a, &problem.y, config, k)?);
        let mut f = problem.objective(&x);
        if !f.is_finite() {
            return Err(Error::Divergence { iteration: 0 });
        }
        trace(k, &x);
        let mut mu = mu0;
        let mut iterations = 0;
        let mut converged = f <= floor;
        'outer: while !converged && iterations < config.max_iters {
            let g = problem.gradient(&x);
            let mut halvings = 0;
            let (cand, fc) = loop {
                let cand = problem.prox(&x - &g * mu, mu);
                let fc = problem.objective(&cand);
                if !backtrack {
                    if !fc.is_finite() {
                        return Err(Error::Divergence {
                            iteration: iterations + 1,
                        });
                    }
                    break (cand, fc);
                }
                if fc <= f {
                    break (cand, fc);
                }
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    converged = true;
                    break 'outer;
                }
                mu *= 0.5;
            };
            iterations += 1;
            converged = fc <= floor || (f - fc).abs() < config.tol * f;
            x = cand;
            f = fc;
            trace(k, &x);
        }
        let residual = residual(&problem, &x, mu);
        results.push(SolverResult {
            x_hat: x.as_slice().to_vec(),
            iterations,
            objective: problem.objective(&x),
            converged,
            fixed_point_residual: residual,
            restart_index: k,
        });
    }
    Ok(best_of(results))
}

/// Fixed-point residual `‖x − (AᵀA)⁻¹Aᵀ(y ⊙ sign(Ax))‖` for the unpenalized
/// amplitude loss when `A` has full column rank; otherwise the length of one
/// more iteration, `‖x − T_μ(x)‖`.
fn residual(problem: &Problem<'_>, x: &DVector<f64>, mu: f64) -> f64 {
    if problem.loss == Loss::Amplitude && problem.penalty == Penalty::None {
        if let Ok(ls) = LeastSquares::new(problem.a) {
            let ax = problem.a.entries() * x;
            return (x - ls.solve(&signed_targets(&ax, &problem.y))).norm();
        }
    }
    let g = problem.gradient(x);
    (x - problem.prox(x - g * mu, mu)).norm()
}
