//! Phase retrieval from magnitude-only Gaussian measurements `y = |Ax₀| + η`.
//!
//! The crate covers the full experimental loop:
//!
//! - [`signals`]: seeded ground truth, Gaussian ensembles, noise, observations.
//! - [`geometry`]: sign maps, sign-invariant distance, ℓ1 projection and
//!   shrinkage, the sharpness certificate `β_ε`, SRIP constants, Gaussian widths.
//! - [`solvers`]: error reduction, amplitude gradient descent, constrained and
//!   regularized nonlinear Lasso, and the linear least-squares/Lasso baselines.
//! - [`harness`]: seeded Monte Carlo sweeps, CSV records, log-log rate fits.
//! - [`config`]: the strict `key = value` run configuration used by the CLI.
//!
//! Everything random is a pure function of an explicit 64-bit seed; see [`rng`].

pub mod config;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod rng;
pub mod signals;
pub mod solvers;

pub use error::{Error, Result};
