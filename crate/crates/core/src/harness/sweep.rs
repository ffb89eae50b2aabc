use rayon::prelude::*;

use super::plan::ExperimentPlan;
use super::records::ExperimentRecord;
use super::trial::{run_trial_detailed, TrialOutcome};
use crate::error::{Error, Result};

/// Fraction of failed trials above which the whole sweep fails.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

#[derive(Debug)]
pub struct Sweep {
    /// Sorted by `(m, d, s, trial)`.
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<Error>,
}

/// Runs every `(grid point, trial)` pair in parallel, keeping the full outcomes.
pub fn run_sweep_detailed(plan: &ExperimentPlan) -> Result<(Vec<TrialOutcome>, Vec<Error>)> {
    plan.validate()?;
    let tasks: Vec<_> = plan
        .grid()
        .into_iter()
        .flat_map(|p| (0..plan.trials).map(move |t| (p, t)))
        .collect();
    let total = tasks.len();
    let results: Vec<Result<TrialOutcome>> = tasks
        .into_par_iter()
        .map(|(p, t)| run_trial_detailed(plan, p, t))
        .collect();
    let mut outcomes = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => failures.push(e),
        }
    }
    if failures.len() as f64 > MAX_FAILURE_FRACTION * total as f64 {
        let failed = failures.len();
        return Err(Error::SweepFailed {
            failed,
            total,
            first: Box::new(failures.swap_remove(0)),
        });
    }
    outcomes.sort_by_key(|o| o.record.sort_key());
    Ok((outcomes, failures))
}

pub fn run_sweep(plan: &ExperimentPlan) -> Result<Sweep> {
    let (outcomes, failures) = run_sweep_detailed(plan)?;
    Ok(Sweep {
        records: outcomes.into_iter().map(|o| o.record).collect(),
        failures,
    })
}
