//! `phasefit check <suite>`: validator suites printing one PASS/FAIL line per property.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;

use clap::Subcommand;
use phasefit::geometry::{expected_abs_xi, f_theta, gaussian_width, srip_constants, width_draws, SripMode, WidthSet};
use phasefit::rng::{derive_seed, tag, Stream};
use phasefit::signals::{gen_gaussian_matrix, gen_noise, gen_signal, observe, Model, NoiseSpec};
use phasefit::solvers::{error_reduction, fixed_point_residual, Init, SolverConfig};

use crate::{usage, CmdResult, Failure};

#[derive(Subcommand)]
pub enum CheckCommand {
    /// Analytic values and monotonicity of the angle function
    Ftheta {
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Monte Carlo E|xi| against its closed form
    Xi {
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Allowed deviation in standard errors
        #[arg(long, default_value_t = 3.0)]
        k: f64,
    },
    /// Exhaustive SRIP constants of a seeded Gaussian matrix
    Srip {
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 5)]
        seed: u64,
    },
    /// Gaussian width estimators against exact values and independent draws
    Width {
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Error-reduction outputs satisfy the fixed-point equation
    FixedPoint {
        #[arg(long, default_value_t = 64)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn finish(self) -> CmdResult {
        Ok(if self.failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        })
    }
}

pub fn run(cmd: CheckCommand) -> CmdResult {
    let mut r = Report { failed: 0 };
    match cmd {
        CheckCommand::Ftheta { grid } => ftheta(&mut r, grid)?,
        CheckCommand::Xi { theta, samples, seed, k } => {
            let (est, se) = expected_abs_xi(theta, samples, seed).map_err(usage)?;
            let exact = f_theta(theta).map_err(usage)? + theta.cos().abs();
            let dev = (est - exact).abs();
            r.line(
                "xi_matches_closed_form",
                dev <= k * se,
                format!("estimate={est} exact={exact} stderr={se} deviation={:.2}se", dev / se),
            );
        }
        CheckCommand::Srip { m, d, s, seed } => srip(&mut r, m, d, s, seed)?,
        CheckCommand::Width { d, samples, seed } => width(&mut r, d, samples, seed)?,
        CheckCommand::FixedPoint { m, d, trials, seed } => fixed_point(&mut r, m, d, trials, seed)?,
    }
    r.finish()
}

fn ftheta(r: &mut Report, grid: usize) -> Result<(), Failure> {
    if grid == 0 {
        return Err(Failure::Usage("--grid must be at least 1".into()));
    }
    let f0 = f_theta(0.0).map_err(usage)?;
    r.line("f(0)=0", f0.abs() <= 1e-12, format!("{f0}"));
    let fh = f_theta(FRAC_PI_2).map_err(usage)?;
    r.line("f(pi/2)=2/pi", (fh - 2.0 / PI).abs() <= 1e-12, format!("{fh}"));
    let mut prev = f0;
    let mut monotone = true;
    let mut nonneg = true;
    for i in 1..=grid {
        let f = f_theta(FRAC_PI_2 * i as f64 / grid as f64).map_err(usage)?;
        monotone &= f >= prev - 1e-15;
        nonneg &= f >= 0.0;
        prev = f;
    }
    r.line("nondecreasing_on_[0,pi/2]", monotone, format!("{grid} steps"));
    r.line("nonnegative_on_[0,pi/2]", nonneg, format!("{grid} steps"));
    Ok(())
}

fn srip(r: &mut Report, m: usize, d: usize, s: usize, seed: u64) -> Result<(), Failure> {
    let a = gen_gaussian_matrix(m, d, seed).map_err(usage)?;
    let est = srip_constants(&a, s, SripMode::Exhaustive, 0, seed).map_err(usage)?;
    r.line(
        "theta_minus_positive",
        est.theta_minus > 0.0,
        format!("theta_minus={} theta_plus={} subsets={}", est.theta_minus, est.theta_plus, est.subsets_evaluated),
    );
    r.line(
        "theta_minus_le_theta_plus",
        est.theta_minus <= est.theta_plus,
        format!("{} <= {}", est.theta_minus, est.theta_plus),
    );
    let mut perm: Vec<usize> = (0..m).collect();
    perm.reverse();
    let b = a.permute_rows(&perm).map_err(usage)?;
    let est2 = srip_constants(&b, s, SripMode::Exhaustive, 0, seed).map_err(usage)?;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
    r.line(
        "row_permutation_invariant",
        close(est.theta_minus, est2.theta_minus) && close(est.theta_plus, est2.theta_plus),
        format!("theta_minus={} theta_plus={}", est2.theta_minus, est2.theta_plus),
    );
    Ok(())
}

/// `E‖g‖` for `g ~ N(0, I_d)`, from `c₁ = √(2/π)` and `c_d·c_{d+1} = d`.
fn chi_mean(d: usize) -> f64 {
    let mut c = (2.0 / PI).sqrt();
    for k in 1..d {
        c = k as f64 / c;
    }
    c
}

fn width(r: &mut Report, d: usize, samples: usize, seed: u64) -> Result<(), Failure> {
    let one = gaussian_width(WidthSet::Sphere(1), samples, seed).map_err(usage)?;
    let exact1 = (2.0 / PI).sqrt();
    r.line(
        "sphere(1)=sqrt(2/pi)",
        (one.mean - exact1).abs() <= 3.0 * one.stderr,
        format!("estimate={} exact={exact1} stderr={}", one.mean, one.stderr),
    );
    let sph = gaussian_width(WidthSet::Sphere(d), samples, seed).map_err(usage)?;
    let exact = chi_mean(d);
    r.line(
        "sphere(d)=E||g||",
        (sph.mean - exact).abs() <= 3.0 * sph.stderr,
        format!("estimate={} exact={exact} stderr={}", sph.mean, sph.stderr),
    );

    let l1 = gaussian_width(WidthSet::L1Ball(d), samples, seed).map_err(usage)?;
    let mut st = Stream::new(derive_seed(seed, tag::SHARD, u64::MAX));
    let ind: Vec<f64> = (0..samples)
        .map(|_| (0..d).map(|_| st.normal().abs()).fold(0.0, f64::max))
        .collect();
    let n = samples as f64;
    let mean = ind.iter().sum::<f64>() / n;
    let se = (ind.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    let tol = 3.0 * (se * se + l1.stderr * l1.stderr).sqrt();
    r.line(
        "l1_ball(d)=E max|g_i|",
        (l1.mean - mean).abs() <= tol,
        format!("estimate={} independent={mean} tol={tol}", l1.mean),
    );

    let kd = width_draws(WidthSet::Kds(d, d), samples.min(2000), seed).map_err(usage)?;
    let sd = width_draws(WidthSet::Sphere(d), samples.min(2000), seed).map_err(usage)?;
    let worst = kd.iter().zip(&sd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    r.line("k_ds(d,d)=sphere(d)_per_draw", worst <= 1e-9, format!("max difference {worst:e}"));
    let k1 = width_draws(WidthSet::Kds(d, 1), samples.min(2000), seed).map_err(usage)?;
    let lb = width_draws(WidthSet::L1Ball(d), samples.min(2000), seed).map_err(usage)?;
    let worst = k1.iter().zip(&lb).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    r.line("k_ds(d,1)=l1_ball(d)_per_draw", worst <= 1e-9, format!("max difference {worst:e}"));
    Ok(())
}

fn fixed_point(r: &mut Report, m: usize, d: usize, trials: usize, seed: u64) -> Result<(), Failure> {
    if m < d {
        return Err(Failure::Usage(format!("--m {m} must be at least --d {d}")));
    }
    let mut truth_worst = 0.0f64;
    let mut solved_worst = 0.0f64;
    let mut converged = 0;
    for t in 0..trials as u64 {
        let ts = derive_seed(seed, tag::TRIAL, t);
        let a = gen_gaussian_matrix(m, d, derive_seed(ts, tag::MATRIX, 0)).map_err(usage)?;
        let x0 = gen_signal(d, None, 1.0, derive_seed(ts, tag::SIGNAL, 0)).map_err(usage)?;
        let clean = observe(&a, &x0, &vec![0.0; m], Model::Phaseless).map_err(usage)?.y;
        let res = fixed_point_residual(&a, clean.as_slice(), x0.values().as_slice()).map_err(usage)?;
        truth_worst = truth_worst.max(res);

        let eta = gen_noise(&NoiseSpec::FixedNorm(1.0), m, derive_seed(ts, tag::NOISE, 0)).map_err(usage)?;
        let y = observe(&a, &x0, &eta, Model::Phaseless).map_err(usage)?.y;
        let cfg = SolverConfig {
            restarts: 5,
            init: Init::Spectral,
            seed: ts,
            ..SolverConfig::default()
        };
        let out = error_reduction(&a, y.as_slice(), &cfg).map_err(crate::runtime)?;
        if out.converged {
            converged += 1;
            let norm = out.x_hat.iter().map(|v| v * v).sum::<f64>().sqrt();
            solved_worst = solved_worst.max(out.fixed_point_residual / (1.0 + norm));
        }
    }
    r.line(
        "noiseless_truth_is_fixed_point",
        truth_worst <= 1e-10,
        format!("max residual {truth_worst:e} over {trials} trials"),
    );
    r.line(
        "converged_solves_are_fixed_points",
        solved_worst <= 1e-6,
        format!("max residual/(1+||x||) {solved_worst:e} over {converged} converged of {trials}"),
    );
    Ok(())
}
