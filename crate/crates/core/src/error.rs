use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {what} = {value} (must be at least 1)")]
    InvalidDimension { what: &'static str, value: usize },

    #[error("invalid sparsity: s = {s} exceeds d = {d}")]
    InvalidSparsity { s: usize, d: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("divergence: objective became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error(
        "exhaustive SRIP limits exceeded ({reason}); use sampled mode for larger instances"
    )]
    ExhaustiveLimit { reason: String },

    #[error("cannot fit log-log slope: {0}")]
    Fit(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid plan: {0}")]
    Plan(String),

    #[error("trial failed (m={m}, d={d}, s={s}, trial={trial}): {source}")]
    Trial {
        m: usize,
        d: usize,
        s: usize,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sweep failed: {failed} of {total} trials errored (first: {first})")]
    SweepFailed {
        failed: usize,
        total: usize,
        first: Box<Error>,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
