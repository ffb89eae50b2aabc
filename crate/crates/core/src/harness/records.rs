//! CSV persistence of experiment records.
//!
//! UTF-8, RFC-4180 quoting, a header row naming the fields in declaration
//! order. Floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64`. Absent `lambda`/`R` are empty fields.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const HEADER: [&str; 17] = [
    "trial",
    "m",
    "d",
    "s",
    "noise_kind",
    "eta_norm",
    "eta_l1",
    "mean_eta",
    "solver",
    "lambda",
    "R",
    "dist",
    "objective",
    "iterations",
    "converged",
    "runtime_ms",
    "seed",
];

/// One solved trial of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub noise_kind: String,
    pub eta_norm: f64,
    pub eta_l1: f64,
    pub mean_eta: f64,
    pub solver: String,
    pub lambda: Option<f64>,
    pub radius: Option<f64>,
    /// `min(‖x̂ − x₀‖, ‖x̂ + x₀‖)`
    pub dist: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub runtime_ms: f64,
    pub seed: u64,
}

impl ExperimentRecord {
    pub fn sort_key(&self) -> (usize, usize, usize, usize) {
        (self.m, self.d, self.s, self.trial)
    }

    fn to_fields(&self) -> [String; 17] {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        [
            self.trial.to_string(),
            self.m.to_string(),
            self.d.to_string(),
            self.s.to_string(),
            self.noise_kind.clone(),
            fmt_f64(self.eta_norm),
            fmt_f64(self.eta_l1),
            fmt_f64(self.mean_eta),
            self.solver.clone(),
            opt(self.lambda),
            opt(self.radius),
            fmt_f64(self.dist),
            fmt_f64(self.objective),
            self.iterations.to_string(),
            self.converged.to_string(),
            fmt_f64(self.runtime_ms),
            self.seed.to_string(),
        ]
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in records {
        w.write_record(r.to_fields())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<memory>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("fields are UTF-8"))
}

pub fn write_records(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = records_to_csv(records)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_records(&bytes)
}

/// Parses a records file. Errors carry the 1-based line of the offending row.
pub fn parse_records(bytes: &[u8]) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let mut rows = rdr.byte_records();
    let header = match rows.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header row".into(),
            })
        }
        Some(h) => h.map_err(|e| csv_error(e, bytes))?,
    };
    let names: Vec<&[u8]> = header.iter().collect();
    let expected: Vec<&[u8]> = HEADER.iter().map(|h| h.as_bytes()).collect();
    if names != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must be {}", HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rows {
        let row = row.map_err(|e| csv_error(e, bytes))?;
        let line = row.position().map(|p| line_at(bytes, p.byte())).unwrap_or(0);
        out.push(parse_row(&row, line)?);
    }
    Ok(out)
}

/// 1-based line of the first content byte at or after `offset`. Record
/// positions may point at the tail of the previous terminator.
fn line_at(bytes: &[u8], offset: u64) -> u64 {
    let mut end = (offset as usize).min(bytes.len());
    while end < bytes.len() && matches!(bytes[end], b'\r' | b'\n') {
        end += 1;
    }
    1 + bytes[..end].iter().filter(|b| **b == b'\n').count() as u64
}

fn csv_error(e: csv::Error, bytes: &[u8]) -> Error {
    let line = e.position().map(|p| line_at(bytes, p.byte())).unwrap_or(0);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

fn parse_row(row: &csv::ByteRecord, line: u64) -> Result<ExperimentRecord> {
    if row.len() != HEADER.len() {
        return Err(Error::Parse {
            line,
            message: format!("expected {} columns, found {}", HEADER.len(), row.len()),
        });
    }
    let field = |i: usize| -> Result<&str> {
        std::str::from_utf8(&row[i]).map_err(|_| Error::Parse {
            line,
            message: format!("column {} is not UTF-8", HEADER[i]),
        })
    };
    let bad = |i: usize, v: &str| Error::Parse {
        line,
        message: format!("bad {} value '{v}'", HEADER[i]),
    };
    let int = |i: usize| -> Result<usize> {
        let v = field(i)?;
        v.parse().map_err(|_| bad(i, v))
    };
    let float = |i: usize| -> Result<f64> {
        let v = field(i)?;
        v.parse().map_err(|_| bad(i, v))
    };
    let opt_float = |i: usize| -> Result<Option<f64>> {
        let v = field(i)?;
        if v.is_empty() {
            Ok(None)
        } else {
            v.parse().map(Some).map_err(|_| bad(i, v))
        }
    };
    Ok(ExperimentRecord {
        trial: int(0)?,
        m: int(1)?,
        d: int(2)?,
        s: int(3)?,
        noise_kind: field(4)?.to_string(),
        eta_norm: float(5)?,
        eta_l1: float(6)?,
        mean_eta: float(7)?,
        solver: field(8)?.to_string(),
        lambda: opt_float(9)?,
        radius: opt_float(10)?,
        dist: float(11)?,
        objective: float(12)?,
        iterations: int(13)?,
        converged: {
            let v = field(14)?;
            v.parse().map_err(|_| bad(14, v))?
        },
        runtime_ms: float(15)?,
        seed: {
            let v = field(16)?;
            v.parse().map_err(|_| bad(16, v))?
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(i: usize) -> ExperimentRecord {
        ExperimentRecord {
            trial: i,
            m: 32 * (1 + i % 2),
            d: 4,
            s: 4,
            noise_kind: "fixed_norm".into(),
            eta_norm: 1.0,
            eta_l1: 3.1 + i as f64,
            mean_eta: -0.012345678901234567,
            solver: "error_reduction".into(),
            lambda: if i % 2 == 0 { None } else { Some(0.1 * i as f64) },
            radius: None,
            dist: 1.0 / 3.0 + i as f64,
            objective: 1e-300,
            iterations: 17 + i,
            converged: i % 3 != 0,
            runtime_ms: 0.5,
            seed: u64::MAX - i as u64,
        }
    }

    #[test]
    fn round_trip_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let recs: Vec<_> = (0..6).map(sample).collect();
        write_records(&recs, &path).unwrap();
        assert_eq!(read_records(&path).unwrap(), recs);
    }

    #[test]
    fn empty_list_is_header_only() {
        let text = records_to_csv(&[]).unwrap();
        assert_eq!(text, format!("{}\r\n", HEADER.join(",")));
        assert!(parse_records(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn wrong_column_count_cites_line() {
        let mut text = records_to_csv(&[sample(0), sample(1), sample(2)]).unwrap();
        // break the second data row (line 3)
        let lines: Vec<&str> = text.split("\r\n").collect();
        let broken = lines[2].rsplit_once(',').unwrap().0.to_string();
        text = [lines[0], lines[1], &broken, lines[3], ""].join("\r\n");
        let err = parse_records(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn bad_values_and_headers_rejected() {
        assert!(parse_records(b"").is_err());
        assert!(parse_records(b"a,b,c\r\n").is_err());
        let text = records_to_csv(&[sample(0)]).unwrap().replace("error_reduction,", "error_reduction,x");
        let err = parse_records(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn quoted_fields_survive() {
        let mut r = sample(1);
        r.noise_kind = "weird, \"quoted\"".into();
        let text = records_to_csv(&[r.clone()]).unwrap();
        assert_eq!(parse_records(text.as_bytes()).unwrap(), vec![r]);
    }

    proptest! {
        #[test]
        fn float_fields_round_trip(
            dist in any::<f64>().prop_filter("finite", |v| v.is_finite()),
            mean in any::<f64>().prop_filter("finite", |v| v.is_finite()),
            lambda in proptest::option::of(0.0f64..1e6),
            seed in any::<u64>(),
        ) {
            let mut r = sample(0);
            r.dist = dist;
            r.mean_eta = mean;
            r.lambda = lambda;
            r.seed = seed;
            let text = records_to_csv(&[r.clone()]).unwrap();
            prop_assert_eq!(parse_records(text.as_bytes()).unwrap(), vec![r]);
        }

        #[test]
        fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
            let _ = parse_records(&bytes);
        }
    }
}
