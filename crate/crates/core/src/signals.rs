//! Ground-truth signals, Gaussian measurement ensembles, noise and observations.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Ground-truth vector `x₀`, optionally tagged with the sparsity it was drawn at.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    values: DVector<f64>,
    sparsity: Option<usize>,
    norm: f64,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Self {
        let values = DVector::from_vec(values);
        let norm = values.norm();
        Signal {
            values,
            sparsity: None,
            norm,
        }
    }

    /// Attaches sparsity metadata, checking the nonzero count.
    pub fn with_sparsity(mut self, s: usize) -> Result<Self> {
        if s > self.dim() {
            return Err(Error::InvalidSparsity { s, d: self.dim() });
        }
        let nnz = self.values.iter().filter(|v| **v != 0.0).count();
        if nnz > s {
            return Err(Error::InvalidSparsity { s: nnz, d: s });
        }
        self.sparsity = Some(s);
        Ok(self)
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn sparsity(&self) -> Option<usize> {
        self.sparsity
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// An `m × d` measurement matrix with the seed that produced it (if any).
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    entries: DMatrix<f64>,
    seed: Option<u64>,
}

impl MeasurementSet {
    /// Wraps an explicit matrix.
    pub fn from_matrix(entries: DMatrix<f64>) -> Result<Self> {
        check_dims(entries.nrows(), entries.ncols())?;
        Ok(MeasurementSet {
            entries,
            seed: None,
        })
    }

    /// Builds from row-major data.
    pub fn from_rows(m: usize, d: usize, row_major: &[f64]) -> Result<Self> {
        check_dims(m, d)?;
        if row_major.len() != m * d {
            return Err(Error::DimensionMismatch {
                what: "matrix data",
                expected: m * d,
                found: row_major.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(m, d, row_major))
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn d(&self) -> usize {
        self.entries.ncols()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Row-permuted copy; `perm[i]` is the source row of output row `i`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.m() {
            return Err(Error::DimensionMismatch {
                what: "row permutation",
                expected: self.m(),
                found: perm.len(),
            });
        }
        let a = &self.entries;
        let entries = DMatrix::from_fn(self.m(), self.d(), |i, j| a[(perm[i], j)]);
        Ok(MeasurementSet {
            entries,
            seed: None,
        })
    }
}

fn check_dims(m: usize, d: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidDimension { what: "m", value: m });
    }
    if d == 0 {
        return Err(Error::InvalidDimension { what: "d", value: d });
    }
    Ok(())
}

/// `m × d` matrix of i.i.d. N(0, 1) entries, filled row by row from the seeded stream.
pub fn gen_gaussian_matrix(m: usize, d: usize, seed: u64) -> Result<MeasurementSet> {
    check_dims(m, d)?;
    let mut stream = Stream::new(seed);
    let data = stream.normals(m * d);
    let entries = DMatrix::from_row_slice(m, d, &data);
    Ok(MeasurementSet {
        entries,
        seed: Some(seed),
    })
}

/// Random signal of length `d` and Euclidean norm `norm`.
///
/// With `s` given, the support is a uniform `s`-subset (seeded Fisher–Yates
/// prefix); otherwise every coordinate is active. Active entries are standard
/// normal, then rescaled. `norm = 0` yields the zero vector.
pub fn gen_signal(d: usize, s: Option<usize>, norm: f64, seed: u64) -> Result<Signal> {
    if d == 0 {
        return Err(Error::InvalidDimension { what: "d", value: d });
    }
    if let Some(s) = s {
        if s > d {
            return Err(Error::InvalidSparsity { s, d });
        }
        if s == 0 {
            return Err(Error::InvalidSparsity { s, d });
        }
    }
    if !(norm >= 0.0) || !norm.is_finite() {
        return Err(Error::param("norm", norm, "must be finite and nonnegative"));
    }
    let mut stream = Stream::new(seed);
    let support: Vec<usize> = match s {
        Some(s) => stream.subset(d, s),
        None => (0..d).collect(),
    };
    let mut values = vec![0.0; d];
    if norm > 0.0 {
        loop {
            for &i in &support {
                values[i] = stream.normal();
            }
            let n = values.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                values.iter_mut().for_each(|v| *v *= norm / n);
                break;
            }
        }
    }
    let sig = Signal::new(values);
    match s {
        Some(s) => sig.with_sparsity(s),
        None => Ok(sig),
    }
}

/// How a noise vector is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum NoiseSpec {
    Zero,
    /// i.i.d. N(0, σ²) per entry.
    IidGaussian(f64),
    /// Gaussian direction rescaled to exactly this Euclidean norm.
    FixedNorm(f64),
    Constant(f64),
    Explicit(Vec<f64>),
}

impl NoiseSpec {
    /// Short kind label used in records and file names.
    pub fn kind(&self) -> &'static str {
        match self {
            NoiseSpec::Zero => "zero",
            NoiseSpec::IidGaussian(_) => "gaussian",
            NoiseSpec::FixedNorm(_) => "fixed_norm",
            NoiseSpec::Constant(_) => "constant",
            NoiseSpec::Explicit(_) => "explicit",
        }
    }

    /// Builds from a kind label and its scalar parameter.
    pub fn from_kind(kind: &str, param: f64) -> Result<Self> {
        let spec = match kind {
            "zero" => NoiseSpec::Zero,
            "gaussian" | "iid_gaussian" => NoiseSpec::IidGaussian(param),
            "fixed_norm" => NoiseSpec::FixedNorm(param),
            "constant" => NoiseSpec::Constant(param),
            _ => {
                return Err(Error::Plan(format!(
                    "unknown noise kind '{kind}' (expected zero, gaussian, fixed_norm or constant)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::IidGaussian(s) if !(s >= 0.0 && s.is_finite()) => {
                Err(Error::param("sigma", s, "must be finite and nonnegative"))
            }
            NoiseSpec::FixedNorm(v) if !(v >= 0.0 && v.is_finite()) => {
                Err(Error::param("norm", v, "must be finite and nonnegative"))
            }
            NoiseSpec::Constant(c) if !c.is_finite() => {
                Err(Error::param("constant", c, "must be finite"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Zero => write!(f, "zero"),
            NoiseSpec::IidGaussian(s) => write!(f, "gaussian:{s}"),
            NoiseSpec::FixedNorm(v) => write!(f, "fixed_norm:{v}"),
            NoiseSpec::Constant(c) => write!(f, "constant:{c}"),
            NoiseSpec::Explicit(v) => write!(f, "explicit[{}]", v.len()),
        }
    }
}

/// Parses `zero`, `gaussian:<σ>`, `fixed_norm:<ν>` or `constant:<c>`.
impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, param) = match s.split_once(':') {
            Some((k, p)) => {
                let v: f64 = p.trim().parse().map_err(|_| {
                    Error::Plan(format!("bad noise parameter '{p}' in '{s}'"))
                })?;
                (k.trim(), v)
            }
            None => (s.trim(), 0.0),
        };
        if kind != "zero" && !s.contains(':') {
            return Err(Error::Plan(format!(
                "noise kind '{kind}' needs a parameter, e.g. {kind}:1"
            )));
        }
        NoiseSpec::from_kind(kind, param)
    }
}

/// Realizes a noise vector of length `m`.
pub fn gen_noise(spec: &NoiseSpec, m: usize, seed: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidDimension { what: "m", value: m });
    }
    spec.validate()?;
    let mut stream = Stream::new(seed);
    Ok(match spec {
        NoiseSpec::Zero => vec![0.0; m],
        NoiseSpec::IidGaussian(sigma) => stream.normals(m).into_iter().map(|z| sigma * z).collect(),
        NoiseSpec::FixedNorm(nu) => {
            if *nu == 0.0 {
                return Ok(vec![0.0; m]);
            }
            loop {
                let z = stream.normals(m);
                let n = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n > 0.0 {
                    break z.into_iter().map(|v| v * nu / n).collect();
                }
            }
        }
        NoiseSpec::Constant(c) => vec![*c; m],
        NoiseSpec::Explicit(v) => {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "explicit noise length",
                    expected: m,
                    found: v.len(),
                });
            }
            v.clone()
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `y = |A x₀| + η`
    Phaseless,
    /// `y = A x₀ + η`
    Linear,
}

#[derive(Clone, Debug)]
pub struct Observation<'a> {
    pub y: DVector<f64>,
    pub eta: DVector<f64>,
    pub model: Model,
    pub signal: &'a Signal,
    pub set: &'a MeasurementSet,
}

pub fn observe<'a>(
    a: &'a MeasurementSet,
    x0: &'a Signal,
    eta: &[f64],
    model: Model,
) -> Result<Observation<'a>> {
    if x0.dim() != a.d() {
        return Err(Error::DimensionMismatch {
            what: "signal length vs matrix columns (d)",
            expected: a.d(),
            found: x0.dim(),
        });
    }
    if eta.len() != a.m() {
        return Err(Error::DimensionMismatch {
            what: "noise length vs matrix rows (m)",
            expected: a.m(),
            found: eta.len(),
        });
    }
    let ax = a.entries() * x0.values();
    let eta = DVector::from_column_slice(eta);
    let y = match model {
        Model::Phaseless => ax.abs() + &eta,
        Model::Linear => ax + &eta,
    };
    Ok(Observation {
        y,
        eta,
        model,
        signal: x0,
        set: a,
    })
}

/// Binary matrix format: `b"PRBM"`, `u32` m, `u32` d, 4 zero bytes, then
/// `m·d` little-endian `f64` in row-major order.
pub const MATRIX_MAGIC: &[u8; 4] = b"PRBM";
pub const MATRIX_HEADER_LEN: usize = 16;

pub fn encode_matrix(a: &MeasurementSet) -> Vec<u8> {
    let (m, d) = (a.m(), a.d());
    let mut out = Vec::with_capacity(MATRIX_HEADER_LEN + 8 * m * d);
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.extend_from_slice(&(d as u32).to_le_bytes());
    out.extend_from_slice(&[0u8; 4]);
    for i in 0..m {
        for j in 0..d {
            out.extend_from_slice(&a.entries()[(i, j)].to_le_bytes());
        }
    }
    out
}

pub fn decode_matrix(bytes: &[u8]) -> Result<MeasurementSet> {
    let bad = |message: String| Error::Parse { line: 0, message };
    if bytes.len() < MATRIX_HEADER_LEN {
        return Err(bad(format!(
            "matrix file too short for header ({} bytes)",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MATRIX_MAGIC {
        return Err(bad("bad magic (expected PRBM)".into()));
    }
    let m = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if bytes[12..16] != [0u8; 4] {
        return Err(bad("reserved header bytes must be zero".into()));
    }
    check_dims(m, d)?;
    let body = &bytes[MATRIX_HEADER_LEN..];
    let expected = m
        .checked_mul(d)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| bad(format!("matrix size {m}x{d} overflows")))?;
    if body.len() != expected {
        return Err(bad(format!(
            "payload is {} bytes, expected {expected} for {m}x{d}",
            body.len()
        )));
    }
    let data: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    MeasurementSet::from_rows(m, d, &data)
}
