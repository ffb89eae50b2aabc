use std::time::Instant;

use super::plan::{ExperimentPlan, GridPoint, LambdaRule, RadiusRule, SolverKind};
use super::records::ExperimentRecord;
use crate::error::{Error, Result};
use crate::geometry::dist_sign;
use crate::rng::{derive_seed, mix_words, tag};
use crate::signals::{gen_gaussian_matrix, gen_noise, gen_signal, observe};
use crate::solvers::{
    amplitude_gradient, compute_lambda, compute_lambda_conjecture, constrained_lasso_solve,
    error_reduction, linear_least_squares, regularized_lasso_solve, SolverConfig,
};

/// Everything a trial produced, including the vectors a record does not keep.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub record: ExperimentRecord,
    pub x_hat: Vec<f64>,
    pub x0: Vec<f64>,
    pub eta: Vec<f64>,
}

/// Seed of one trial: `mix_words([master, m, d, s, trial, TRIAL])`, with
/// `s = 0` for dense signals. Matrix, signal, noise and solver streams are
/// derived from it with their purpose tags.
pub fn trial_seed(master: u64, point: GridPoint, trial: usize) -> u64 {
    mix_words(&[
        master,
        point.m as u64,
        point.d as u64,
        point.s.unwrap_or(0) as u64,
        trial as u64,
        tag::TRIAL,
    ])
}

pub fn run_trial(plan: &ExperimentPlan, point: GridPoint, trial: usize) -> Result<ExperimentRecord> {
    run_trial_detailed(plan, point, trial).map(|o| o.record)
}

pub fn run_trial_detailed(plan: &ExperimentPlan, point: GridPoint, trial: usize) -> Result<TrialOutcome> {
    let wrap = |e: Error| Error::Trial {
        m: point.m,
        d: point.d,
        s: point.s.unwrap_or(point.d),
        trial,
        source: Box::new(e),
    };
    run_inner(plan, point, trial).map_err(wrap)
}

fn run_inner(plan: &ExperimentPlan, point: GridPoint, trial: usize) -> Result<TrialOutcome> {
    let GridPoint { m, d, s } = point;
    let seed = trial_seed(plan.master_seed, point, trial);
    let a = gen_gaussian_matrix(m, d, derive_seed(seed, tag::MATRIX, 0))?;
    let x0 = gen_signal(d, s, plan.x0_norm, derive_seed(seed, tag::SIGNAL, 0))?;
    let eta = gen_noise(&plan.noise, m, derive_seed(seed, tag::NOISE, 0))?;
    let obs = observe(&a, &x0, &eta, plan.solver.model())?;
    let y = obs.y.as_slice();

    let config = SolverConfig {
        seed: derive_seed(seed, tag::SOLVER, 0),
        ..plan.solver_config.clone()
    };

    let mut lambda = None;
    let mut radius = None;
    let started = Instant::now();
    let result = match plan.solver {
        SolverKind::ErrorReduction => error_reduction(&a, y, &config)?,
        SolverKind::AmplitudeGradient => amplitude_gradient(&a, y, &config)?,
        SolverKind::LinearLs => linear_least_squares(&a, y)?,
        kind if kind.needs_radius() => {
            let r = match plan.radius_rule.unwrap_or(RadiusRule::OracleL1Norm) {
                RadiusRule::OracleL1Norm => x0.l1_norm(),
                RadiusRule::Fixed(r) => r,
            };
            radius = Some(r);
            constrained_lasso_solve(&a, y, r, kind.loss(), &config)?
        }
        kind => {
            let l = match plan.lambda_rule.unwrap_or(LambdaRule::Paper(1.0)) {
                LambdaRule::Paper(c) => compute_lambda(&eta, d, c)?,
                LambdaRule::Conjecture(c) => compute_lambda_conjecture(&eta, d, c)?,
                LambdaRule::Fixed(v) => v,
            };
            lambda = Some(l);
            regularized_lasso_solve(&a, y, l, kind.loss(), &config)?
        }
    };
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let x0v = x0.values().as_slice().to_vec();
    let dist = dist_sign(&result.x_hat, &x0v)?;
    let record = ExperimentRecord {
        trial,
        m,
        d,
        s: s.unwrap_or(d),
        noise_kind: plan.noise.kind().to_string(),
        eta_norm: eta.iter().map(|v| v * v).sum::<f64>().sqrt(),
        eta_l1: eta.iter().map(|v| v.abs()).sum(),
        mean_eta: eta.iter().sum::<f64>() / m as f64,
        solver: plan.solver.name().to_string(),
        lambda,
        radius,
        dist,
        objective: result.objective,
        iterations: result.iterations,
        converged: result.converged,
        runtime_ms,
        seed,
    };
    Ok(TrialOutcome {
        record,
        x_hat: result.x_hat,
        x0: x0v,
        eta,
    })
}
