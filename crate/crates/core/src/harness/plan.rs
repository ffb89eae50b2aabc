use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::signals::{Model, NoiseSpec};
use crate::solvers::{Loss, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    ErrorReduction,
    AmplitudeGradient,
    ConstrainedLasso,
    RegularizedLasso,
    LinearLs,
    LinearLassoConstrained,
    LinearLassoRegularized,
}

impl SolverKind {
    pub const ALL: [SolverKind; 7] = [
        SolverKind::ErrorReduction,
        SolverKind::AmplitudeGradient,
        SolverKind::ConstrainedLasso,
        SolverKind::RegularizedLasso,
        SolverKind::LinearLs,
        SolverKind::LinearLassoConstrained,
        SolverKind::LinearLassoRegularized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::ErrorReduction => "error_reduction",
            SolverKind::AmplitudeGradient => "amplitude_gradient",
            SolverKind::ConstrainedLasso => "constrained_lasso",
            SolverKind::RegularizedLasso => "regularized_lasso",
            SolverKind::LinearLs => "linear_ls",
            SolverKind::LinearLassoConstrained => "linear_lasso_constrained",
            SolverKind::LinearLassoRegularized => "linear_lasso_regularized",
        }
    }

    pub fn model(self) -> Model {
        match self {
            SolverKind::LinearLs
            | SolverKind::LinearLassoConstrained
            | SolverKind::LinearLassoRegularized => Model::Linear,
            _ => Model::Phaseless,
        }
    }

    pub fn loss(self) -> Loss {
        match self.model() {
            Model::Linear => Loss::Linear,
            Model::Phaseless => Loss::Amplitude,
        }
    }

    pub fn is_sparse(self) -> bool {
        self.needs_radius() || self.needs_lambda()
    }

    pub fn needs_radius(self) -> bool {
        matches!(
            self,
            SolverKind::ConstrainedLasso | SolverKind::LinearLassoConstrained
        )
    }

    pub fn needs_lambda(self) -> bool {
        matches!(
            self,
            SolverKind::RegularizedLasso | SolverKind::LinearLassoRegularized
        )
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SolverKind::ALL.iter().map(|k| k.name()).collect();
                Error::Plan(format!(
                    "unknown solver '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// How the regularized solvers pick `λ` from the realized noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaRule {
    /// `c·(‖η‖₁ + ‖η‖√ln d)`
    Paper(f64),
    /// `c·‖η‖√ln d`
    Conjecture(f64),
    Fixed(f64),
}

/// How the constrained solvers pick the ℓ1 radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusRule {
    /// `R = ‖x₀‖₁`
    OracleL1Norm,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub d_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub s_values: Option<Vec<usize>>,
    pub noise: NoiseSpec,
    pub solver: SolverKind,
    pub lambda_rule: Option<LambdaRule>,
    pub radius_rule: Option<RadiusRule>,
    pub trials: usize,
    pub master_seed: u64,
    pub x0_norm: f64,
    /// Template for every solve; its `seed` is replaced per trial.
    pub solver_config: SolverConfig,
}

impl ExperimentPlan {
    /// Plan with the defaults used throughout the acceptance runs: unit-norm
    /// signal, spectral initialization and five restarts.
    pub fn new(solver: SolverKind, d_values: Vec<usize>, m_values: Vec<usize>, noise: NoiseSpec, trials: usize, master_seed: u64) -> Self {
        ExperimentPlan {
            d_values,
            m_values,
            s_values: None,
            noise,
            solver,
            lambda_rule: solver.needs_lambda().then_some(LambdaRule::Paper(1.0)),
            radius_rule: solver.needs_radius().then_some(RadiusRule::OracleL1Norm),
            trials,
            master_seed,
            x0_norm: 1.0,
            solver_config: SolverConfig {
                restarts: 5,
                ..SolverConfig::default()
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_values.is_empty() || self.m_values.is_empty() {
            return Err(Error::Plan("d and m grids must be nonempty".into()));
        }
        if let Some(&0) = self.d_values.iter().chain(&self.m_values).find(|v| **v == 0) {
            return Err(Error::Plan("grid values must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Plan("trials must be at least 1".into()));
        }
        if !(self.x0_norm >= 0.0 && self.x0_norm.is_finite()) {
            return Err(Error::Plan(format!("x0_norm {} must be finite and nonnegative", self.x0_norm)));
        }
        self.noise.validate()?;
        self.solver_config.validate()?;
        if self.solver.is_sparse() {
            match &self.s_values {
                Some(s) if !s.is_empty() => {}
                _ => {
                    return Err(Error::Plan(format!(
                        "solver {} needs s_values",
                        self.solver
                    )))
                }
            }
        }
        if let Some(s) = &self.s_values {
            for &sv in s {
                for &d in &self.d_values {
                    if sv == 0 || sv > d {
                        return Err(Error::InvalidSparsity { s: sv, d });
                    }
                }
            }
        }
        if self.solver.needs_radius() && self.radius_rule.is_none() {
            return Err(Error::Plan(format!("solver {} needs an R rule", self.solver)));
        }
        if self.solver.needs_lambda() && self.lambda_rule.is_none() {
            return Err(Error::Plan(format!("solver {} needs a lambda rule", self.solver)));
        }
        Ok(())
    }

    /// Every `(m, d, s)` combination, ordered by the record sort key.
    pub fn grid(&self) -> Vec<GridPoint> {
        let mut m = self.m_values.clone();
        let mut d = self.d_values.clone();
        m.sort_unstable();
        m.dedup();
        d.sort_unstable();
        d.dedup();
        let s: Vec<Option<usize>> = match &self.s_values {
            Some(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v.into_iter().map(Some).collect()
            }
            None => vec![None],
        };
        let mut out = Vec::new();
        for &mi in &m {
            for &di in &d {
                for &si in &s {
                    out.push(GridPoint { m: mi, d: di, s: si });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub m: usize,
    pub d: usize,
    /// `None` for dense signals.
    pub s: Option<usize>,
}
