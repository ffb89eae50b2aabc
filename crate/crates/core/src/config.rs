//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! d = 10
//! m_list = 64, 128, 256
//! noise.kind = fixed_norm
//! noise.param = 1
//! seed = 7
//! ```
//!
//! Every key except `seed` has a default. Unknown and repeated keys are
//! rejected with their line number.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{ExperimentPlan, LambdaRule, RadiusRule, SolverKind};
use crate::signals::NoiseSpec;

pub const KEYS: [&str; 15] = [
    "d",
    "m_list",
    "s_list",
    "noise.kind",
    "noise.param",
    "solver",
    "lambda.rule",
    "lambda.c",
    "R.rule",
    "trials",
    "seed",
    "out.records",
    "out.plots",
    "x0_norm",
    "restarts",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaKind {
    Paper,
    Conjecture,
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub d: Vec<usize>,
    pub m_list: Vec<usize>,
    pub s_list: Option<Vec<usize>>,
    pub noise: NoiseSpec,
    pub solver: SolverKind,
    pub lambda_rule: LambdaKind,
    /// Multiplier for `paper`/`conjecture`, the value itself for `fixed`.
    pub lambda_c: f64,
    pub r_rule: RadiusRule,
    pub trials: usize,
    pub seed: u64,
    pub out_records: PathBuf,
    pub out_plots: PathBuf,
    pub x0_norm: f64,
    pub restarts: usize,
}

impl RunConfig {
    pub fn defaults(seed: u64) -> Self {
        RunConfig {
            d: vec![10],
            m_list: (6..=12).map(|k| 1usize << k).collect(),
            s_list: None,
            noise: NoiseSpec::FixedNorm(1.0),
            solver: SolverKind::ErrorReduction,
            lambda_rule: LambdaKind::Paper,
            lambda_c: 1.0,
            r_rule: RadiusRule::OracleL1Norm,
            trials: 50,
            seed,
            out_records: PathBuf::from("records.csv"),
            out_plots: PathBuf::from("plots.dat"),
            x0_norm: 1.0,
            restarts: 5,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::defaults(0);
        let mut seen: Vec<&str> = Vec::new();
        let mut noise_kind: Option<(usize, String)> = None;
        let mut noise_param: Option<f64> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', found '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let known = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| err(format!("unknown key '{key}'")))?;
            if seen.contains(known) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            seen.push(known);
            if value.is_empty() {
                return Err(err(format!("empty value for '{key}'")));
            }

            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("'{key}' expects a number, found '{v}'")))
            };
            let count = |v: &str| -> Result<usize> {
                v.parse::<usize>()
                    .map_err(|_| err(format!("'{key}' expects a nonnegative integer, found '{v}'")))
            };
            let list = |v: &str| -> Result<Vec<usize>> {
                let items: Vec<&str> = v
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .collect();
                items.into_iter().map(count).collect()
            };

            match key {
                "d" => cfg.d = list(value)?,
                "m_list" => cfg.m_list = list(value)?,
                "s_list" => cfg.s_list = Some(list(value)?),
                "noise.kind" => noise_kind = Some((line, value.to_string())),
                "noise.param" => noise_param = Some(num(value)?),
                "solver" => cfg.solver = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "lambda.rule" => {
                    cfg.lambda_rule = match value {
                        "paper" => LambdaKind::Paper,
                        "conjecture" => LambdaKind::Conjecture,
                        "fixed" => LambdaKind::Fixed,
                        _ => {
                            return Err(err(format!(
                                "lambda.rule must be paper, conjecture or fixed, found '{value}'"
                            )))
                        }
                    }
                }
                "lambda.c" => {
                    cfg.lambda_c = num(value)?;
                    if cfg.lambda_c < 0.0 {
                        return Err(err("lambda.c must be nonnegative".into()));
                    }
                }
                "R.rule" => {
                    cfg.r_rule = if value == "oracle_l1_norm" {
                        RadiusRule::OracleL1Norm
                    } else {
                        let r = num(value).map_err(|_| {
                            err(format!("R.rule must be oracle_l1_norm or a radius, found '{value}'"))
                        })?;
                        if r < 0.0 {
                            return Err(err("R.rule radius must be nonnegative".into()));
                        }
                        RadiusRule::Fixed(r)
                    }
                }
                "trials" => cfg.trials = count(value)?,
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| err(format!("seed must be an unsigned 64-bit integer, found '{value}'")))?
                }
                "out.records" => cfg.out_records = PathBuf::from(value),
                "out.plots" => cfg.out_plots = PathBuf::from(value),
                "x0_norm" => cfg.x0_norm = num(value)?,
                "restarts" => cfg.restarts = count(value)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }

        if !seen.contains(&"seed") {
            return Err(Error::Config {
                line: 0,
                message: "missing required key 'seed'".into(),
            });
        }
        let kind_line = noise_kind.as_ref().map(|(l, _)| *l).unwrap_or(0);
        let kind = noise_kind.map(|(_, k)| k).unwrap_or_else(|| "fixed_norm".into());
        cfg.noise = NoiseSpec::from_kind(&kind, noise_param.unwrap_or(1.0)).map_err(|e| Error::Config {
            line: kind_line,
            message: e.to_string(),
        })?;
        cfg.to_plan().map_err(|e| Error::Config {
            line: 0,
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn to_plan(&self) -> Result<ExperimentPlan> {
        let mut plan = ExperimentPlan::new(
            self.solver,
            self.d.clone(),
            self.m_list.clone(),
            self.noise.clone(),
            self.trials,
            self.seed,
        );
        plan.s_values = self.s_list.clone();
        plan.x0_norm = self.x0_norm;
        plan.solver_config.restarts = self.restarts;
        if self.solver.needs_lambda() {
            plan.lambda_rule = Some(match self.lambda_rule {
                LambdaKind::Paper => LambdaRule::Paper(self.lambda_c),
                LambdaKind::Conjecture => LambdaRule::Conjecture(self.lambda_c),
                LambdaKind::Fixed => LambdaRule::Fixed(self.lambda_c),
            });
        }
        if self.solver.needs_radius() {
            plan.radius_rule = Some(self.r_rule);
        }
        plan.validate()?;
        Ok(plan)
    }
}
