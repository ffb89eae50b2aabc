//! Error reduction: alternate between the sign pattern `sign(Ax)` and the
//! least-squares fit `x = argmin ‖Ax − y ⊙ sign(Ax)‖`.
//!
//! Each half-step minimizes `G(x, u) = ‖Ax − u ⊙ y‖²` over one block with
//! `u ∈ {±1}^m`, so `‖|Axₖ| − y‖²` never increases. Fixed points satisfy
//! `x = (AᵀA)⁻¹Aᵀ(y ⊙ sign(Ax))`.

use nalgebra::DVector;

use super::lsq::LeastSquares;
use super::{
    amplitude_objective, best_of, check_y, exact_fit_floor, initial_point, signed_targets,
    SolverConfig, SolverResult,
};
use crate::error::Result;
use crate::signals::MeasurementSet;

pub fn error_reduction(a: &MeasurementSet, y: &[f64], config: &SolverConfig) -> Result<SolverResult> {
    error_reduction_traced(a, y, config, |_, _| {})
}

/// As [`error_reduction`], calling `trace(restart, objective)` after every iterate.
pub(crate) fn error_reduction_traced(
    a: &MeasurementSet,
    y: &[f64],
    config: &SolverConfig,
    mut trace: impl FnMut(usize, f64),
) -> Result<SolverResult> {
    config.validate()?;
    let yv = check_y(a, y)?;
    let ls = LeastSquares::new(a)?;
    let floor = exact_fit_floor(&yv);
    let mut results = Vec::with_capacity(config.restarts);
    for k in 0..config.restarts {
        let mut x = initial_point(a, &yv, config, k)?;
        let mut ax = a.entries() * &x;
        let mut f = amplitude_objective(&ax, &yv);
        trace(k, f);
        let mut iterations = 0;
        let mut converged = f <= floor;
        while !converged && iterations < config.max_iters {
            let x_next = ls.solve(&signed_targets(&ax, &yv));
            let ax_next = a.entries() * &x_next;
            let f_next = amplitude_objective(&ax_next, &yv);
            iterations += 1;
            trace(k, f_next);
            // with negative entries in y the objective can rise; keep iterating then
            let drop = f - f_next;
            converged = f_next <= floor || (drop >= 0.0 && drop < config.tol * f);
            x = x_next;
            ax = ax_next;
            f = f_next;
        }
        let residual = residual_with(&ls, &x, &ax, &yv);
        results.push(SolverResult {
            x_hat: x.as_slice().to_vec(),
            iterations,
            objective: f,
            converged,
            fixed_point_residual: residual,
            restart_index: k,
        });
    }
    Ok(best_of(results))
}

fn residual_with(ls: &LeastSquares, x: &DVector<f64>, ax: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x - ls.solve(&signed_targets(ax, y))).norm()
}

/// `‖x − (AᵀA)⁻¹Aᵀ(y ⊙ sign(Ax))‖₂`.
pub fn fixed_point_residual(a: &MeasurementSet, y: &[f64], x: &[f64]) -> Result<f64> {
    let yv = check_y(a, y)?;
    if x.len() != a.d() {
        return Err(crate::error::Error::DimensionMismatch {
            what: "x length vs d",
            expected: a.d(),
            found: x.len(),
        });
    }
    let ls = LeastSquares::new(a)?;
    let xv = DVector::from_column_slice(x);
    let ax = a.entries() * &xv;
    Ok(residual_with(&ls, &xv, &ax, &yv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::dist_sign;
    use crate::signals::{gen_gaussian_matrix, gen_noise, gen_signal, observe, Model, NoiseSpec};
    use crate::solvers::Init;

    #[test]
    fn ground_truth_is_a_fixed_point() {
        let a = gen_gaussian_matrix(60, 5, 3).unwrap();
        let x0 = gen_signal(5, None, 1.0, 4).unwrap();
        let y = observe(&a, &x0, &[0.0; 60], Model::Phaseless).unwrap().y;
        let cfg = SolverConfig {
            init: Init::Given(x0.values().as_slice().to_vec()),
            ..Default::default()
        };
        let r = error_reduction(&a, y.as_slice(), &cfg).unwrap();
        assert_eq!(r.x_hat, x0.values().as_slice());
        assert_eq!(r.iterations, 0);
        assert!(r.fixed_point_residual <= 1e-10);

        let neg: Vec<f64> = x0.values().iter().map(|v| -v).collect();
        assert!(fixed_point_residual(&a, y.as_slice(), x0.values().as_slice()).unwrap() <= 1e-10);
        assert!(fixed_point_residual(&a, y.as_slice(), &neg).unwrap() <= 1e-10);
    }

    #[test]
    fn one_dimensional_hand_iteration() {
        let a = MeasurementSet::from_rows(2, 1, &[1.0, -1.0]).unwrap();
        let cfg = SolverConfig {
            init: Init::Given(vec![1.0]),
            ..Default::default()
        };
        let r = error_reduction(&a, &[2.0, 2.0], &cfg).unwrap();
        assert_eq!(r.x_hat.len(), 1);
        assert!((r.x_hat[0] - 2.0).abs() < 1e-15);
        assert!(r.objective < 1e-28);
    }

    #[test]
    fn underdetermined_is_singular() {
        let a = gen_gaussian_matrix(8, 10, 0).unwrap();
        let err = error_reduction(&a, &[1.0; 8], &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Singular(_)));
    }

    #[test]
    fn objective_is_monotone() {
        for seed in 0..10 {
            let a = gen_gaussian_matrix(40, 6, seed).unwrap();
            let x0 = gen_signal(6, None, 1.0, seed + 50).unwrap();
            // monotone descent needs y ≥ 0
            let eta = gen_noise(&NoiseSpec::Constant(0.1), 40, seed + 60).unwrap();
            let y = observe(&a, &x0, &eta, Model::Phaseless).unwrap().y;
            let cfg = SolverConfig {
                init: Init::Random,
                restarts: 3,
                seed,
                ..Default::default()
            };
            let mut prev: Vec<f64> = vec![f64::INFINITY; 3];
            error_reduction_traced(&a, y.as_slice(), &cfg, |k, f| {
                assert!(f <= prev[k] + 1e-10, "restart {k}: {f} > {}", prev[k]);
                prev[k] = f;
            })
            .unwrap();
        }
    }

    #[test]
    fn noiseless_recovery_with_restarts() {
        let d = 10;
        let mut ok = 0;
        for trial in 0..50u64 {
            let a = gen_gaussian_matrix(8 * d, d, 1000 + trial).unwrap();
            let x0 = gen_signal(d, None, 1.0, 2000 + trial).unwrap();
            let y = observe(&a, &x0, &vec![0.0; 8 * d], Model::Phaseless).unwrap().y;
            let cfg = SolverConfig {
                restarts: 5,
                seed: trial,
                ..Default::default()
            };
            let r = error_reduction(&a, y.as_slice(), &cfg).unwrap();
            if dist_sign(&r.x_hat, x0.values().as_slice()).unwrap() <= 1e-6 {
                ok += 1;
            }
        }
        assert!(ok >= 45, "{ok}/50");
    }

    #[test]
    fn converged_results_are_fixed_points() {
        for seed in 0..20 {
            let a = gen_gaussian_matrix(64, 10, seed).unwrap();
            let x0 = gen_signal(10, None, 1.0, seed + 7).unwrap();
            let eta = gen_noise(&NoiseSpec::FixedNorm(1.0), 64, seed + 8).unwrap();
            let y = observe(&a, &x0, &eta, Model::Phaseless).unwrap().y;
            let cfg = SolverConfig {
                restarts: 5,
                seed,
                ..Default::default()
            };
            let r = error_reduction(&a, y.as_slice(), &cfg).unwrap();
            let norm = r.x_hat.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r.converged {
                assert!(r.fixed_point_residual <= 1e-6 * (1.0 + norm));
            }
            let again = fixed_point_residual(&a, y.as_slice(), &r.x_hat).unwrap();
            assert!((again - r.fixed_point_residual).abs() <= 1e-12);
        }
    }

    #[test]
    fn sign_equivariant_objective() {
        let a = gen_gaussian_matrix(50, 4, 9).unwrap();
        let x0 = gen_signal(4, None, 1.0, 10).unwrap();
        let eta = gen_noise(&NoiseSpec::FixedNorm(0.3), 50, 11).unwrap();
        let y = observe(&a, &x0, &eta, Model::Phaseless).unwrap().y;
        let plus = x0.values().as_slice().to_vec();
        let minus: Vec<f64> = plus.iter().map(|v| -v).collect();
        let run = |x: Vec<f64>| {
            error_reduction(&a, y.as_slice(), &SolverConfig { init: Init::Given(x), ..Default::default() }).unwrap()
        };
        let (rp, rm) = (run(plus), run(minus));
        assert!((rp.objective - rm.objective).abs() <= 1e-12 * (1.0 + rp.objective));
        let neg: Vec<f64> = rm.x_hat.iter().map(|v| -v).collect();
        assert!(dist_sign(&rp.x_hat, &neg).unwrap() < 1e-10);
    }
}
