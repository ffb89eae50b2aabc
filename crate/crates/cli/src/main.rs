use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasefit::config::RunConfig;
use phasefit::harness::{
    emit_plot_data, records_to_csv, run_sweep, run_trial, ExperimentPlan, GridPoint, GroupBy,
    LambdaRule, RadiusRule, SolverKind, Statistic,
};
use phasefit::signals::{encode_matrix, gen_gaussian_matrix, NoiseSpec};
use phasefit::Error;

mod check;
mod report;

/// Usage and configuration problems exit with 2, runtime failures with 1.
pub(crate) enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

pub(crate) type CmdResult = Result<ExitCode, Failure>;

#[derive(Parser)]
#[command(name = "phasefit", version, about = "Phase retrieval experiments from magnitude-only measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded trial and print its record as CSV
    Solve(SolveArgs),
    /// Run a configured sweep, write records and plot data, print the fitted slope
    Sweep {
        config: PathBuf,
        /// Write runtime_ms as 0 so reruns produce byte-identical files
        #[arg(long)]
        no_timing: bool,
    },
    /// Run a validator suite and print PASS/FAIL lines
    Check {
        #[command(subcommand)]
        which: check::CheckCommand,
    },
    /// Summarize a records file into plot data and a text table
    Report { records: PathBuf, out_dir: PathBuf },
    /// Write a seeded Gaussian measurement matrix in PRBM format
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
    /// Sparsity; omit for a dense signal
    #[arg(long)]
    s: Option<usize>,
    /// zero, gaussian:<sigma>, fixed_norm:<norm> or constant:<c>
    #[arg(long, default_value = "zero")]
    noise: NoiseSpec,
    #[arg(long, default_value = "error_reduction")]
    solver: SolverKind,
    #[arg(long)]
    seed: u64,
    /// Fixed lambda for the regularized solvers (default: noise-derived rule)
    #[arg(long, conflicts_with = "radius")]
    lambda: Option<f64>,
    /// Fixed l1 radius for the constrained solvers (default: ||x0||_1)
    #[arg(long = "R", id = "radius")]
    radius: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    x0_norm: f64,
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Sweep { config, no_timing } => sweep(&config, no_timing),
        Command::Check { which } => check::run(which),
        Command::Report { records, out_dir } => report::run(&records, &out_dir),
        Command::Generate { m, d, seed, out } => generate(m, d, seed, &out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

pub(crate) fn runtime(e: Error) -> Failure {
    Failure::Runtime(e.to_string())
}

pub(crate) fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> CmdResult {
    let mut plan = ExperimentPlan::new(args.solver, vec![args.d], vec![args.m], args.noise, 1, args.seed);
    plan.s_values = args.s.map(|s| vec![s]);
    plan.x0_norm = args.x0_norm;
    plan.solver_config.restarts = args.restarts;
    for (flag, v) in [("--lambda", args.lambda), ("--R", args.radius)] {
        if let Some(v) = v.filter(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Failure::Usage(format!("{flag} {v} must be finite and nonnegative")));
        }
    }
    if let Some(l) = args.lambda {
        if !args.solver.needs_lambda() {
            return Err(Failure::Usage(format!("--lambda does not apply to {}", args.solver)));
        }
        plan.lambda_rule = Some(LambdaRule::Fixed(l));
    }
    if let Some(r) = args.radius {
        if !args.solver.needs_radius() {
            return Err(Failure::Usage(format!("--R does not apply to {}", args.solver)));
        }
        plan.radius_rule = Some(RadiusRule::Fixed(r));
    }
    plan.validate().map_err(usage)?;
    let point = GridPoint {
        m: args.m,
        d: args.d,
        s: args.s,
    };
    let record = run_trial(&plan, point, args.trial).map_err(runtime)?;
    let text = records_to_csv(&[record]).map_err(runtime)?;
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Relative output paths in a config resolve against the config's directory.
fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn sweep(config: &Path, no_timing: bool) -> CmdResult {
    let cfg = RunConfig::load(config).map_err(|e| {
        Failure::Usage(format!("{}: {e}", config.display()))
    })?;
    let plan = cfg.to_plan().map_err(usage)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let records_path = resolve(base, &cfg.out_records);
    let plots_path = resolve(base, &cfg.out_plots);

    let mut sweep = run_sweep(&plan).map_err(runtime)?;
    for f in &sweep.failures {
        eprintln!("warning: {f}");
    }
    if no_timing {
        sweep.records.iter_mut().for_each(|r| r.runtime_ms = 0.0);
    }
    phasefit::harness::write_records(&sweep.records, &records_path).map_err(runtime)?;
    let fit = emit_plot_data(&sweep.records, GroupBy::M, Statistic::Median, &plots_path).map_err(runtime)?;
    match fit {
        Some(f) => println!("slope={} r2={}", f.slope, f.r_squared),
        None => {
            eprintln!("note: no log-log fit (zero distances or a single m value)");
            println!("slope=NaN r2=NaN");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(m: usize, d: usize, seed: u64, out: &Path) -> CmdResult {
    let a = gen_gaussian_matrix(m, d, seed).map_err(usage)?;
    fs::write(out, encode_matrix(&a)).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    println!("wrote {m}x{d} matrix to {}", out.display());
    Ok(ExitCode::SUCCESS)
}
