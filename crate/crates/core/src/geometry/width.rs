//! Monte Carlo Gaussian widths `w(T) = E sup_{x∈T} ⟨g, x⟩`.

use rayon::prelude::*;

use super::sparse::shrink;
use super::{norm1, norm2};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, tag, Stream};

/// Draws per shard. Each shard has its own derived seed, so the draw sequence
/// for a given `(seed, samples)` does not depend on the thread count.
const SHARD: usize = 4096;

const TAU_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthSet {
    /// Unit sphere `S^{d−1}`.
    Sphere(usize),
    /// Unit ℓ1 ball `B₁^d`.
    L1Ball(usize),
    /// `K_{d,s} = {‖x‖₂ ≤ 1, ‖x‖₁ ≤ √s}`.
    Kds(usize, usize),
}

impl WidthSet {
    pub fn dim(&self) -> usize {
        match *self {
            WidthSet::Sphere(d) | WidthSet::L1Ball(d) | WidthSet::Kds(d, _) => d,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::InvalidDimension { what: "d", value: 0 });
        }
        if let WidthSet::Kds(d, s) = *self {
            if s == 0 || s > d {
                return Err(Error::InvalidSparsity { s, d });
            }
        }
        Ok(())
    }

    /// `sup_{x∈T} ⟨g, x⟩` for one draw.
    pub fn support_value(&self, g: &[f64]) -> f64 {
        match *self {
            WidthSet::Sphere(_) => norm2(g),
            WidthSet::L1Ball(_) => g.iter().fold(0.0, |m, v| m.max(v.abs())),
            WidthSet::Kds(_, s) => k_ds_maximizer(g, s).0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WidthEstimate {
    pub set: WidthSet,
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: usize,
}

/// Maximizer of `⟨g, x⟩` over `K_{d,s}` and its value.
///
/// The maximizer is `soft(g, τ)/‖soft(g, τ)‖₂` for the smallest `τ ≥ 0` that
/// makes it ℓ1-feasible; `τ` is bracketed in `[0, max|gᵢ|]` and bisected to
/// `1e-10`, keeping the feasible end.
pub fn k_ds_maximizer(g: &[f64], s: usize) -> (f64, Vec<f64>) {
    let radius = (s as f64).sqrt();
    let gn = norm2(g);
    if gn == 0.0 {
        return (0.0, vec![0.0; g.len()]);
    }
    let direction = |v: Vec<f64>| {
        let n = norm2(&v);
        v.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let feasible = |tau: f64| -> bool {
        let w = shrink(g, tau);
        let n = norm2(&w);
        n == 0.0 || norm1(&w) <= radius * n
    };
    if norm1(g) <= radius * gn {
        let x = direction(g.to_vec());
        return (gn, x);
    }
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (mut lo, mut hi) = (0.0, gmax);
    while hi - lo > TAU_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let w = shrink(g, hi);
    let x = if norm2(&w) > 0.0 {
        direction(w)
    } else {
        // Only the largest-magnitude entries survive in the limit.
        let tied: Vec<f64> = g
            .iter()
            .map(|v| if v.abs() == gmax { v.signum() } else { 0.0 })
            .collect();
        direction(tied)
    };
    let value = g.iter().zip(&x).map(|(a, b)| a * b).sum();
    (value, x)
}

fn shard_draws(set: WidthSet, seed: u64, shard: usize, count: usize) -> Vec<f64> {
    let d = set.dim();
    let mut stream = Stream::new(derive_seed(seed, tag::SHARD, shard as u64));
    let mut g = vec![0.0; d];
    (0..count)
        .map(|_| {
            g.iter_mut().for_each(|v| *v = stream.normal());
            set.support_value(&g)
        })
        .collect()
}

/// Per-draw support values, in draw order.
pub fn width_draws(set: WidthSet, samples: usize, seed: u64) -> Result<Vec<f64>> {
    set.validate()?;
    let shards = samples.div_ceil(SHARD);
    let parts: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let count = SHARD.min(samples - k * SHARD);
            shard_draws(set, seed, k, count)
        })
        .collect();
    Ok(parts.concat())
}

pub fn gaussian_width(set: WidthSet, samples: usize, seed: u64) -> Result<WidthEstimate> {
    if samples < 2 {
        return Err(Error::InvalidDimension {
            what: "samples (need at least 2)",
            value: samples,
        });
    }
    let draws = width_draws(set, samples, seed)?;
    let (mean, stderr) = mean_stderr(&draws);
    Ok(WidthEstimate {
        set,
        mean,
        stderr,
        samples,
    })
}

pub(crate) fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationPoint {
    pub t: f64,
    /// Empirical `P(|f(g) − mean| ≥ t)`.
    pub empirical: f64,
    /// `2 exp(−t²/4)`
    pub envelope: f64,
}

/// Empirical tails of `f(g) = max|gᵢ|` (1-Lipschitz) around its sample mean,
/// alongside the envelope `2 exp(−t²/4)`.
pub fn concentration_tails(d: usize, draws: usize, t_grid: &[f64], seed: u64) -> Result<Vec<ConcentrationPoint>> {
    if draws < 2 {
        return Err(Error::InvalidDimension {
            what: "draws (need at least 2)",
            value: draws,
        });
    }
    let vals = width_draws(WidthSet::L1Ball(d), draws, seed)?;
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    Ok(t_grid
        .iter()
        .map(|&t| {
            let hits = vals.iter().filter(|v| (*v - mean).abs() >= t).count();
            ConcentrationPoint {
                t,
                empirical: hits as f64 / vals.len() as f64,
                envelope: 2.0 * (-t * t / 4.0).exp(),
            }
        })
        .collect())
}
