//! Seeded experiment sweeps, record files and rate fits.

mod fit;
mod plan;
mod plot;
mod records;
mod sharpness;
mod sweep;
mod trial;

pub use fit::{fit_loglog, fit_points, group_statistics, mean, median, spearman, GroupBy, GroupStat, SlopeFit, Statistic};
pub use plan::{ExperimentPlan, GridPoint, LambdaRule, RadiusRule, SolverKind};
pub use plot::{emit_plot_data, plot_data, sidecar_path, sidecar_text};
pub use records::{fmt_f64, parse_records, read_records, records_to_csv, write_records, ExperimentRecord, HEADER};
pub use sharpness::{run_with_noise, sharpness_experiment, sharpness_plan, SharpnessReport, CERTIFICATE_EPSILON};
pub use sweep::{run_sweep, run_sweep_detailed, Sweep, MAX_FAILURE_FRACTION};
pub use trial::{run_trial, run_trial_detailed, trial_seed, TrialOutcome};
