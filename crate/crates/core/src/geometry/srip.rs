//! Strong restricted isometry constants of `A/√m` over `s`-sparse directions.
//!
//! For a row subset `I` with `|I| ≥ m/2` and a support `S` of size `s`, the
//! extremes of `‖A_I x‖²/(m‖x‖²)` over `x` supported on `S` are the extreme
//! eigenvalues of `A_{I,S}ᵀ A_{I,S} / m`. Exhaustive mode visits every pair;
//! sampled mode visits random `(I, x)` pairs and so only brackets the true
//! constants from inside.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::signals::MeasurementSet;

pub const EXHAUSTIVE_MAX_M: usize = 16;
pub const EXHAUSTIVE_MAX_SUPPORTS: u128 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SripMode {
    Exhaustive,
    /// Inner bound pair only: `θ₋` may be too large and `θ₊` too small.
    Sampled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SripEstimate {
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub s: usize,
    pub mode: SripMode,
    pub subsets_evaluated: u64,
    pub directions_evaluated: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All size-`k` subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn min_subset_size(m: usize) -> usize {
    m.div_ceil(2)
}

/// Extreme eigenvalues of a small symmetric matrix stored row-major.
fn eig_extremes(g: &[f64], s: usize) -> (f64, f64) {
    match s {
        1 => (g[0], g[0]),
        2 => {
            let (a, b, c) = (g[0], g[1], g[3]);
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            (mid - rad, mid + rad)
        }
        _ => {
            let e = SymmetricEigen::new(DMatrix::from_row_slice(s, s, g)).eigenvalues;
            let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
    }
}

pub fn srip_constants(
    a: &MeasurementSet,
    s: usize,
    mode: SripMode,
    budget: usize,
    seed: u64,
) -> Result<SripEstimate> {
    let (m, d) = (a.m(), a.d());
    if s == 0 || s > d {
        return Err(Error::InvalidSparsity { s, d });
    }
    match mode {
        SripMode::Exhaustive => exhaustive(a, s),
        SripMode::Sampled => {
            if budget == 0 {
                return Err(Error::InvalidDimension {
                    what: "budget",
                    value: 0,
                });
            }
            Ok(sampled(a, s, budget, seed, m, d))
        }
    }
}

fn exhaustive(a: &MeasurementSet, s: usize) -> Result<SripEstimate> {
    let (m, d) = (a.m(), a.d());
    if m > EXHAUSTIVE_MAX_M {
        return Err(Error::ExhaustiveLimit {
            reason: format!("m = {m} > {EXHAUSTIVE_MAX_M}"),
        });
    }
    let n_supports = binomial(d, s);
    if n_supports > EXHAUSTIVE_MAX_SUPPORTS {
        return Err(Error::ExhaustiveLimit {
            reason: format!("C({d}, {s}) = {n_supports} > {EXHAUSTIVE_MAX_SUPPORTS}"),
        });
    }
    let supports = combinations(d, s);
    let k_min = min_subset_size(m);
    let entries = a.entries();
    let scale = 1.0 / m as f64;

    // Per-row outer products on each support, reused across subsets.
    let outer: Vec<Vec<f64>> = supports
        .iter()
        .map(|sup| {
            let mut flat = Vec::with_capacity(m * s * s);
            for i in 0..m {
                for &p in sup {
                    for &q in sup {
                        flat.push(entries[(i, p)] * entries[(i, q)]);
                    }
                }
            }
            flat
        })
        .collect();

    let ss = s * s;
    let mut g = vec![0.0; ss];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut subsets = 0u64;
    for mask in 0u32..(1u32 << m) {
        if (mask.count_ones() as usize) < k_min {
            continue;
        }
        subsets += 1;
        for flat in &outer {
            g.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..m {
                if mask & (1 << i) != 0 {
                    for (acc, v) in g.iter_mut().zip(&flat[i * ss..(i + 1) * ss]) {
                        *acc += v;
                    }
                }
            }
            g.iter_mut().for_each(|v| *v *= scale);
            let (l, h) = eig_extremes(&g, s);
            lo = lo.min(l);
            hi = hi.max(h);
        }
    }
    Ok(SripEstimate {
        theta_minus: lo.max(0.0),
        theta_plus: hi.max(lo.max(0.0)),
        s,
        mode: SripMode::Exhaustive,
        subsets_evaluated: subsets,
        directions_evaluated: supports.len() as u64,
    })
}

fn sampled(a: &MeasurementSet, s: usize, budget: usize, seed: u64, m: usize, d: usize) -> SripEstimate {
    let mut stream = Stream::new(seed);
    let k_min = min_subset_size(m);
    let entries = a.entries();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..budget {
        let size = stream.index(k_min, m + 1);
        let rows = stream.subset(m, size);
        let support = stream.subset(d, s);
        let dir: Vec<f64> = stream.normals(s);
        let nrm2: f64 = dir.iter().map(|v| v * v).sum();
        if nrm2 == 0.0 {
            continue;
        }
        let val: f64 = rows
            .iter()
            .map(|&i| {
                let p: f64 = support.iter().zip(&dir).map(|(&j, x)| entries[(i, j)] * x).sum();
                p * p
            })
            .sum::<f64>()
            / (m as f64 * nrm2);
        lo = lo.min(val);
        hi = hi.max(val);
    }
    SripEstimate {
        theta_minus: lo,
        theta_plus: hi,
        s,
        mode: SripMode::Sampled,
        subsets_evaluated: budget as u64,
        directions_evaluated: budget as u64,
    }
}
