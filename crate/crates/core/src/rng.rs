//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a [`ChaCha8Rng`] seeded
//! with a 64-bit value. Standard normals use the Box–Muller transform on two
//! uniforms `u1 ∈ (0, 1]`, `u2 ∈ [0, 1)`:
//!
//! ```text
//! r = sqrt(-2 ln u1);  z0 = r cos(2π u2);  z1 = r sin(2π u2)
//! ```
//!
//! Both variates are used, `z0` first. Uniforms are `rand`'s 53-bit `f64`
//! conversion. None of this may change without bumping the stream version,
//! since frozen seeds in tests and experiment logs depend on it.
//!
//! Sub-seeds are derived with [`derive_seed`], a SplitMix64 chain over
//! `(parent, tag, index)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bumped whenever the generator or the normal transform changes.
pub const STREAM_VERSION: u32 = 1;

/// Purpose tags mixed into derived seeds.
pub mod tag {
    pub const MATRIX: u64 = 0x4d41_5452; // "MATR"
    pub const SIGNAL: u64 = 0x5349_474e; // "SIGN"
    pub const NOISE: u64 = 0x4e4f_4953; // "NOIS"
    pub const SOLVER: u64 = 0x534f_4c56; // "SOLV"
    pub const TRIAL: u64 = 0x5452_4941; // "TRIA"
    pub const RESTART: u64 = 0x5253_5452; // "RSTR"
    pub const SHARD: u64 = 0x5348_5244; // "SHRD"
    pub const SUPPORT: u64 = 0x5355_5050; // "SUPP"
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a sequence of words into one seed: `h ← splitmix64(h ⊕ wᵢ)` starting
/// from `h = splitmix64(first)`.
pub fn mix_words(words: &[u64]) -> u64 {
    let mut iter = words.iter();
    let mut h = splitmix64(*iter.next().unwrap_or(&0));
    for &w in iter {
        h = splitmix64(h ^ w);
    }
    h
}

/// Sub-seed for one purpose and index under a parent seed.
pub fn derive_seed(parent: u64, purpose: u64, index: u64) -> u64 {
    mix_words(&[parent, purpose, index])
}

/// A seeded stream of uniforms and standard normals.
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform integer in `lo..hi`.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..hi)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn normals(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// First `k` entries of a seeded Fisher–Yates shuffle of `0..n`, sorted.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k.min(n) {
            let j = self.index(i, n);
            idx.swap(i, j);
        }
        idx.truncate(k.min(n));
        idx.sort_unstable();
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = Stream::new(42).normals(17);
        let b = Stream::new(42).normals(17);
        assert_eq!(a, b);
        assert_ne!(a, Stream::new(43).normals(17));
    }

    #[test]
    fn derived_seeds_differ_by_purpose_and_index() {
        let s = 7;
        let a = derive_seed(s, tag::MATRIX, 0);
        assert_ne!(a, derive_seed(s, tag::SIGNAL, 0));
        assert_ne!(a, derive_seed(s, tag::MATRIX, 1));
        assert_eq!(a, derive_seed(s, tag::MATRIX, 0));
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of the canonical SplitMix64 generator seeded at 0:
        // successive states are k·GOLDEN.
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(GOLDEN), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn subset_is_sorted_and_distinct() {
        let mut st = Stream::new(3);
        let s = st.subset(20, 7);
        assert_eq!(s.len(), 7);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&i| i < 20));
    }

    #[test]
    fn normal_moments() {
        let z = Stream::new(11).normals(200_000);
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 3.0 / n.sqrt() * 1.5);
        assert!((var - 1.0).abs() < 0.01);
    }
}
