//! Computable geometric objects: sign maps, sign-invariant distance, ℓ1
//! projection and shrinkage, the angle function behind the sharpness lower
//! bound, SRIP constants and Gaussian widths.

mod lower_bound;
pub(crate) mod sparse;
mod srip;
mod width;

pub use lower_bound::{
    beta_epsilon, expected_abs_xi, f_theta, xi_closed_form, LowerBoundCertificate,
};
pub use sparse::{project_l1_ball, soft_threshold};
pub use srip::{srip_constants, SripEstimate, SripMode};
pub use width::{
    concentration_tails, gaussian_width, k_ds_maximizer, width_draws, ConcentrationPoint,
    WidthEstimate, WidthSet,
};

use crate::error::{Error, Result};

/// Entrywise sign with `sign(0) = +1`.
pub fn sign_vector(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| sign(x)).collect()
}

#[inline]
pub(crate) fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `min(‖x − z‖₂, ‖x + z‖₂)`.
pub fn dist_sign(x: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::DimensionMismatch {
            what: "dist_sign operands",
            expected: x.len(),
            found: z.len(),
        });
    }
    let (mut minus, mut plus) = (0.0, 0.0);
    for (a, b) in x.iter().zip(z) {
        minus += (a - b) * (a - b);
        plus += (a + b) * (a + b);
    }
    Ok(minus.min(plus).sqrt())
}

/// Angle in `[0, π]` between two vectors; `π/2` if either is zero.
pub fn angle_between(x: &[f64], z: &[f64]) -> f64 {
    let nx = norm2(x);
    let nz = norm2(z);
    if nx == 0.0 || nz == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    // half-angle form; acos loses half the digits near 0 and π
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in x.iter().zip(z) {
        let (u, v) = (a / nx, b / nz);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}
