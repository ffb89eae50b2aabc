use crate::error::{Error, Result};

/// Euclidean projection onto `{w : ‖w‖₁ ≤ radius}` by sort and threshold.
///
/// Sorting `|v|` descending, the threshold is `θ = (Σ_{i≤k} uᵢ − R)/k` for the
/// largest `k` with `u_k > (Σ_{i≤k} uᵢ − R)/k`; the result is the soft
/// threshold of `v` at `θ`.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Result<Vec<f64>> {
    if !(radius >= 0.0) {
        return Err(Error::param("R", radius, "l1 radius must be nonnegative"));
    }
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 <= radius {
        return Ok(v.to_vec());
    }
    if radius == 0.0 {
        return Ok(vec![0.0; v.len()]);
    }
    let mut u: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - radius) / (k + 1) as f64;
        if uk > t {
            theta = t;
        } else {
            break;
        }
    }
    Ok(shrink(v, theta.max(0.0)))
}

/// Entrywise `sign(vᵢ)·max(|vᵢ| − τ, 0)`.
pub fn soft_threshold(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    if !(tau >= 0.0) {
        return Err(Error::param("tau", tau, "threshold must be nonnegative"));
    }
    Ok(shrink(v, tau))
}

pub(crate) fn shrink(v: &[f64], tau: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let a = x.abs() - tau;
            if a > 0.0 {
                a.copysign(x)
            } else {
                0.0
            }
        })
        .collect()
}
