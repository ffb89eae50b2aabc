use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// `f(θ) = 2/π·(sin θ + (π/2 − θ) cos θ) − |cos θ|` on `[0, π]`.
pub fn f_theta(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(xi_closed_form(theta) - theta.cos().abs())
}

/// `E|g₁(g₁ cos θ + g₂ sin θ)| = 2/π·(sin θ + (π/2 − θ) cos θ)` for `θ ∈ [0, π]`.
pub fn xi_closed_form(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0;
    }
    2.0 / PI * (theta.sin() + (FRAC_PI_2 - theta) * theta.cos())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::param("theta", theta, "angle must lie in [0, π]"));
    }
    Ok(())
}

/// Monte Carlo estimate and standard error of `E|g₁(g₁ cos θ + g₂ sin θ)|`.
pub fn expected_abs_xi(theta: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidDimension {
            what: "samples",
            value: 0,
        });
    }
    let (s, c) = theta.sin_cos();
    let mut stream = Stream::new(seed);
    let (mut sum, mut sumsq) = (0.0, 0.0);
    for _ in 0..samples {
        let g1 = stream.normal();
        let g2 = stream.normal();
        let xi = (g1 * (g1 * c + g2 * s)).abs();
        sum += xi;
        sumsq += xi * xi;
    }
    let n = samples as f64;
    let mean = sum / n;
    let stderr = if samples > 1 {
        ((sumsq - n * mean * mean).max(0.0) / (n - 1.0) / n).sqrt()
    } else {
        f64::INFINITY
    };
    Ok((mean, stderr))
}

/// Inputs and value of the sharpness certificate `β_ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundCertificate {
    pub x0_norm: f64,
    /// `Σηᵢ/m`
    pub mean_eta: f64,
    /// `‖η‖/√m`
    pub eta_rms: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub beta: f64,
    /// Optional lower bound on `√(2/π)|Σηᵢ|/m`.
    pub delta0: Option<f64>,
}

impl LowerBoundCertificate {
    /// Distance below which the estimate would contradict the certificate.
    pub fn predicted_min_dist(&self) -> f64 {
        self.beta / 9.0
    }

    /// Attaches `δ₀`, which must not exceed `√(2/π)|mean_eta|`.
    pub fn with_delta0(mut self, delta0: f64) -> Result<Self> {
        let cap = (2.0 / PI).sqrt() * self.mean_eta.abs();
        if !(delta0 >= 0.0) || delta0 > cap {
            return Err(Error::param(
                "delta0",
                delta0,
                "must lie in [0, sqrt(2/pi)*|mean eta|]",
            ));
        }
        self.delta0 = Some(delta0);
        Ok(self)
    }
}

/// `β_ε = |‖x₀‖·f(θ) + √(2/π)·Σηᵢ/m| − (‖x₀‖ + ‖η‖/√m)·ε`.
pub fn beta_epsilon(
    x0_norm: f64,
    mean_eta: f64,
    eta_rms: f64,
    theta: f64,
    epsilon: f64,
) -> Result<LowerBoundCertificate> {
    if !(x0_norm >= 0.0) {
        return Err(Error::param("x0_norm", x0_norm, "must be nonnegative"));
    }
    if !(eta_rms >= 0.0) {
        return Err(Error::param("eta_rms", eta_rms, "must be nonnegative"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon", epsilon, "must be positive"));
    }
    if !mean_eta.is_finite() {
        return Err(Error::param("mean_eta", mean_eta, "must be finite"));
    }
    let f = f_theta(theta)?;
    let beta = (x0_norm * f + (2.0 / PI).sqrt() * mean_eta).abs() - (x0_norm + eta_rms) * epsilon;
    Ok(LowerBoundCertificate {
        x0_norm,
        mean_eta,
        eta_rms,
        theta,
        epsilon,
        beta,
        delta0: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent evaluation of `(1/π)∫₀^π |cos θ + cos φ| dφ` by composite
    /// Simpson's rule, split at the kink φ = π − θ.
    fn xi_quadrature(theta: f64) -> f64 {
        let g = |phi: f64| (theta.cos() + phi.cos()).abs();
        let simpson = |a: f64, b: f64| {
            let n = 20_000;
            let h = (b - a) / n as f64;
            let mut s = g(a) + g(b);
            for i in 1..n {
                let x = a + h * i as f64;
                s += if i % 2 == 1 { 4.0 * g(x) } else { 2.0 * g(x) };
            }
            s * h / 3.0
        };
        let kink = PI - theta;
        (simpson(0.0, kink) + simpson(kink, PI)) / PI
    }

    #[test]
    fn quadrature_oracle_agrees_with_closed_form() {
        for k in 0..=16 {
            let theta = PI * k as f64 / 16.0;
            let q = xi_quadrature(theta);
            assert!((q - xi_closed_form(theta)).abs() < 1e-10, "θ={theta}: {q}");
        }
        // Frozen from the quadrature oracle.
        assert!((xi_quadrature(PI / 4.0) - 0.803_711_548_7).abs() < 1e-9);
    }

    #[test]
    fn f_theta_values() {
        assert_eq!(f_theta(0.0).unwrap(), 0.0);
        assert!((f_theta(FRAC_PI_2).unwrap() - 2.0 / PI).abs() < 1e-12);
        assert!((f_theta(PI / 4.0).unwrap() - 0.096_604_767_5).abs() < 1e-9);
        assert!(f_theta(-0.1).is_err());
        assert!(f_theta(PI + 1e-9).is_err());
        assert!(f_theta(f64::NAN).is_err());
    }

    #[test]
    fn f_theta_monotone_and_nonnegative() {
        let n = 10_000;
        let mut prev = f_theta(0.0).unwrap();
        for i in 1..=n {
            let t = FRAC_PI_2 * i as f64 / n as f64;
            let f = f_theta(t).unwrap();
            assert!(f >= 0.0);
            assert!(f >= prev - 1e-15, "not monotone at {t}");
            prev = f;
        }
    }

    #[test]
    fn xi_monte_carlo_matches_identity() {
        for k in 0..=4 {
            let theta = PI / 8.0 * k as f64;
            let (est, se) = expected_abs_xi(theta, 100_000, 1 + k as u64).unwrap();
            let target = f_theta(theta).unwrap() + theta.cos().abs();
            assert!((est - target).abs() <= 4.0 * se, "θ={theta} est={est} target={target} se={se}");
        }
        let (est, se) = expected_abs_xi(0.0, 100_000, 1).unwrap();
        assert!((est - 1.0).abs() <= 3.0 * se);
        assert!(expected_abs_xi(0.0, 0, 1).is_err());
    }

    #[test]
    fn beta_examples() {
        let c = beta_epsilon(0.0, 1.0, 1.0, 0.0, 0.1).unwrap();
        assert!((c.beta - ((2.0 / PI).sqrt() - 0.1)).abs() < 1e-12);
        assert!((c.beta - 0.697_885).abs() < 1e-6);
        let c = beta_epsilon(1.0, 0.0, 0.0, 0.0, 0.1).unwrap();
        assert!((c.beta + 0.1).abs() < 1e-15);
        let c = beta_epsilon(1.0, 0.0, 0.0, FRAC_PI_2, 0.01).unwrap();
        assert!((c.beta - 0.626_620).abs() < 1e-6);
        assert!(beta_epsilon(1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(beta_epsilon(-1.0, 0.0, 0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn certificate_reevaluates_and_delta0_is_capped() {
        let c = beta_epsilon(1.3, -0.4, 0.9, 1.1, 0.05).unwrap();
        let again = (c.x0_norm * f_theta(c.theta).unwrap() + (2.0 / PI).sqrt() * c.mean_eta).abs()
            - (c.x0_norm + c.eta_rms) * c.epsilon;
        assert!((c.beta - again).abs() <= 1e-12);
        let cap = (2.0 / PI).sqrt() * 0.4;
        assert!(c.clone().with_delta0(cap * 0.5).is_ok());
        assert!(c.with_delta0(cap * 1.01).is_err());
    }
}
