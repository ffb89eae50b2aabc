use nalgebra::DVector;

use super::check_y;
use crate::error::Result;
use crate::rng::Stream;
use crate::signals::MeasurementSet;

const POWER_STEPS: usize = 200;
const POWER_TOL: f64 = 1e-10;

/// `√(π/2)·mean(y)`, from `E|⟨a, x₀⟩| = √(2/π)‖x₀‖`; clamped at zero.
pub(crate) fn norm_estimate(y: &DVector<f64>) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    ((std::f64::consts::PI / 2.0).sqrt() * mean).max(0.0)
}

/// Leading eigenvector of `(1/m) Σ yᵢ² aᵢaᵢᵀ`, scaled by the norm estimate,
/// with its largest-magnitude coordinate made positive.
pub fn spectral_init(a: &MeasurementSet, y: &[f64], seed: u64) -> Result<Vec<f64>> {
    let y = check_y(a, y)?;
    let d = a.d();
    let scale = norm_estimate(&y);
    let w = y.map(|v| v * v);
    if scale == 0.0 || w.iter().all(|v| *v == 0.0) {
        return Ok(vec![0.0; d]);
    }
    let m = a.m() as f64;
    let apply = |v: &DVector<f64>| -> DVector<f64> {
        let av = a.entries() * v;
        a.entries().tr_mul(&av.component_mul(&w)) / m
    };

    let mut stream = Stream::new(seed);
    let mut v = DVector::from_vec(stream.normals(d));
    if v.norm() == 0.0 {
        v[0] = 1.0;
    }
    v /= v.norm();
    let mut eig = 0.0;
    for _ in 0..POWER_STEPS {
        let mv = apply(&v);
        let next_eig = v.dot(&mv);
        let n = mv.norm();
        if n == 0.0 {
            break;
        }
        v = mv / n;
        let done = (next_eig - eig).abs() <= POWER_TOL * next_eig.abs();
        eig = next_eig;
        if done {
            break;
        }
    }

    let mut pivot = 0;
    for i in 1..d {
        if v[i].abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    if v[pivot] < 0.0 {
        v = -v;
    }
    Ok((v * scale).as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_sign;
    use crate::signals::{gen_gaussian_matrix, observe, Model, Signal};

    #[test]
    fn zero_measurements_give_zero() {
        let a = gen_gaussian_matrix(10, 3, 0).unwrap();
        assert_eq!(spectral_init(&a, &[0.0; 10], 1).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn one_dimensional_init_is_norm_estimate() {
        let a = gen_gaussian_matrix(50, 1, 2).unwrap();
        let x = Signal::new(vec![-1.7]);
        let y = observe(&a, &x, &[0.0; 50], Model::Phaseless).unwrap().y;
        let init = spectral_init(&a, y.as_slice(), 3).unwrap();
        let expected = norm_estimate(&y);
        assert!(init[0] > 0.0);
        assert!((init[0] - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn noiseless_init_is_close() {
        let x = Signal::new(vec![1.0, 0.0]);
        for seed in 0..20 {
            let a = gen_gaussian_matrix(400, 2, seed).unwrap();
            let y = observe(&a, &x, &[0.0; 400], Model::Phaseless).unwrap().y;
            let init = spectral_init(&a, y.as_slice(), seed + 100).unwrap();
            let d = dist_sign(&init, x.values().as_slice()).unwrap();
            assert!(d < 0.3, "seed {seed}: {d}");
        }
    }
}
