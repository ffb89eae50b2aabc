//! Constant-noise floor experiment.
//!
//! With `η = (1, …, 1)` the noise has a nonzero mean, and the least-squares
//! estimate cannot converge to `±x₀` however large `m` grows. Each record is
//! paired with the `β_ε` certificate evaluated at the realized angle between
//! `x̂` and `x₀`.

use super::plan::{ExperimentPlan, SolverKind};
use super::records::ExperimentRecord;
use super::sweep::run_sweep_detailed;
use crate::error::{Error, Result};
use crate::geometry::{angle_between, beta_epsilon, LowerBoundCertificate};
use crate::signals::NoiseSpec;

pub const CERTIFICATE_EPSILON: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct SharpnessReport {
    pub records: Vec<ExperimentRecord>,
    pub min_dist: f64,
    /// One per record, same order.
    pub certificates: Vec<LowerBoundCertificate>,
}

/// Error reduction (spectral init, five restarts) on a dense unit-norm signal.
pub fn sharpness_plan(d: usize, m_values: &[usize], trials: usize, master_seed: u64, noise: NoiseSpec) -> ExperimentPlan {
    ExperimentPlan::new(
        SolverKind::ErrorReduction,
        vec![d],
        m_values.to_vec(),
        noise,
        trials,
        master_seed,
    )
}

pub fn sharpness_experiment(d: usize, m_values: &[usize], trials: usize, master_seed: u64) -> Result<SharpnessReport> {
    run_with_noise(d, m_values, trials, master_seed, NoiseSpec::Constant(1.0))
}

/// Same pipeline with an arbitrary noise model (zero noise gives the control run).
pub fn run_with_noise(d: usize, m_values: &[usize], trials: usize, master_seed: u64, noise: NoiseSpec) -> Result<SharpnessReport> {
    if m_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Plan("m_values must be nondecreasing".into()));
    }
    if trials == 0 {
        return Err(Error::Plan("trials must be at least 1".into()));
    }
    let plan = sharpness_plan(d, m_values, trials, master_seed, noise);
    let (outcomes, _) = run_sweep_detailed(&plan)?;
    let mut certificates = Vec::with_capacity(outcomes.len());
    let mut records = Vec::with_capacity(outcomes.len());
    let mut min_dist = f64::INFINITY;
    for o in outcomes {
        let m = o.record.m as f64;
        let theta = angle_between(&o.x_hat, &o.x0);
        let x0_norm = o.x0.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cert = beta_epsilon(
            x0_norm,
            o.record.mean_eta,
            o.record.eta_norm / m.sqrt(),
            theta,
            CERTIFICATE_EPSILON,
        )?;
        min_dist = min_dist.min(o.record.dist);
        certificates.push(cert);
        records.push(o.record);
    }
    Ok(SharpnessReport {
        records,
        min_dist,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_and_nonnegative_floor() {
        let r = sharpness_experiment(4, &[32, 64], 3, 5).unwrap();
        assert_eq!(r.records.len(), 6);
        assert_eq!(r.certificates.len(), 6);
        assert!(r.min_dist >= 0.0);
        for (rec, cert) in r.records.iter().zip(&r.certificates) {
            assert!((cert.mean_eta - 1.0).abs() < 1e-12);
            assert!((cert.eta_rms - rec.eta_norm / (rec.m as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_decreasing_grid() {
        assert!(sharpness_experiment(4, &[64, 32], 1, 0).is_err());
    }
}
