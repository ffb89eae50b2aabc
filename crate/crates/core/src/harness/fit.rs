//! Group statistics and log-log slope fits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::records::ExperimentRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupBy {
    M,
    D,
    S,
}

impl GroupBy {
    pub fn key(self, r: &ExperimentRecord) -> usize {
        match self {
            GroupBy::M => r.m,
            GroupBy::D => r.d,
            GroupBy::S => r.s,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupBy::M => "m",
            GroupBy::D => "d",
            GroupBy::S => "s",
        }
    }
}

impl FromStr for GroupBy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(GroupBy::M),
            "d" => Ok(GroupBy::D),
            "s" => Ok(GroupBy::S),
            _ => Err(Error::Plan(format!("cannot group by '{s}' (expected m, d or s)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Median,
    Mean,
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Median => "median",
            Statistic::Mean => "mean",
        })
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Statistic::Median),
            "mean" => Ok(Statistic::Mean),
            _ => Err(Error::Plan(format!("unknown statistic '{s}' (expected median or mean)"))),
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Summary of the `dist` column within one group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupStat {
    pub key: usize,
    pub value: f64,
    /// Standard error of the statistic: `σ/√n` for the mean and the normal
    /// approximation `1.2533·σ/√n` for the median; zero for a single sample.
    pub stderr: f64,
    pub count: usize,
    pub min: f64,
}

/// Per-group statistics of `dist`, ordered by group key.
pub fn group_statistics(records: &[ExperimentRecord], group_by: GroupBy, statistic: Statistic) -> Vec<GroupStat> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(group_by.key(r)).or_default().push(r.dist);
    }
    groups
        .into_iter()
        .map(|(key, mut v)| {
            // fixed order so the statistic does not depend on record order
            v.sort_unstable_by(f64::total_cmp);
            let n = v.len();
            let mu = mean(&v);
            let sd = if n > 1 {
                (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            let (value, factor) = match statistic {
                Statistic::Median => (median(&v), 1.2533),
                Statistic::Mean => (mu, 1.0),
            };
            GroupStat {
                key,
                value,
                stderr: factor * sd / (n as f64).sqrt(),
                count: n,
                min: v[0],
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    /// OLS standard error of the slope (zero with two points).
    pub slope_stderr: f64,
}

impl SlopeFit {
    /// `slope ± k·stderr`
    pub fn interval(&self, k: f64) -> (f64, f64) {
        (self.slope - k * self.slope_stderr, self.slope + k * self.slope_stderr)
    }
}

/// Ordinary least squares through `(ln x, ln y)`.
pub fn fit_points(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 distinct groups, found {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Fit(format!(
                "statistic {y} at {x} is not positive; noiseless runs reach dist = 0 and have no log-log rate"
            )));
        }
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all group values are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let slope_stderr = if points.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        points: points.len(),
        slope_stderr,
    })
}

pub fn fit_loglog(records: &[ExperimentRecord], group_by: GroupBy, statistic: Statistic) -> Result<SlopeFit> {
    let stats = group_statistics(records, group_by, statistic);
    let pts: Vec<(f64, f64)> = stats.iter().map(|g| (g.key as f64, g.value)).collect();
    fit_points(&pts)
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(m: usize, trial: usize, dist: f64) -> ExperimentRecord {
        ExperimentRecord {
            trial,
            m,
            d: 4,
            s: 4,
            noise_kind: "zero".into(),
            eta_norm: 0.0,
            eta_l1: 0.0,
            mean_eta: 0.0,
            solver: "linear_ls".into(),
            lambda: None,
            radius: None,
            dist,
            objective: 0.0,
            iterations: 1,
            converged: true,
            runtime_ms: 0.0,
            seed: 0,
        }
    }

    fn records(f: impl Fn(f64) -> f64) -> Vec<ExperimentRecord> {
        let mut v = Vec::new();
        for k in 5..10 {
            let m = 1usize << k;
            for t in 0..3 {
                v.push(rec(m, t, f(m as f64)));
            }
        }
        v
    }

    #[test]
    fn exact_power_laws() {
        let fit = fit_loglog(&records(|m| m.powf(-0.5)), GroupBy::M, Statistic::Median).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let fit = fit_loglog(&records(|m| 3.0 / m), GroupBy::M, Statistic::Mean).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        let fit = fit_loglog(&records(|_| 0.2), GroupBy::M, Statistic::Median).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert_eq!(fit.points, 5);
    }

    #[test]
    fn fit_errors() {
        assert!(fit_loglog(&records(|_| 0.0), GroupBy::M, Statistic::Median).is_err());
        let one: Vec<_> = (0..3).map(|t| rec(8, t, 1.0)).collect();
        assert!(fit_loglog(&one, GroupBy::M, Statistic::Median).is_err());
        let err = fit_points(&[(1.0, 1.0), (2.0, -1.0)]).unwrap_err();
        assert!(err.to_string().contains("noiseless"));
    }

    #[test]
    fn statistics_ignore_order() {
        let mut recs = records(|m| 1.0 / m);
        recs[0].dist = 7.0;
        let a = group_statistics(&recs, GroupBy::M, Statistic::Mean);
        recs.reverse();
        let b = group_statistics(&recs, GroupBy::M, Statistic::Mean);
        assert_eq!(a, b);
    }

    #[test]
    fn median_and_stderr() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let recs = vec![rec(4, 0, 1.0), rec(4, 1, 3.0)];
        let g = group_statistics(&recs, GroupBy::M, Statistic::Mean);
        assert!((g[0].stderr - 1.0).abs() < 1e-12);
        assert_eq!(g[0].min, 1.0);
    }

    #[test]
    fn slope_stderr_zero_for_exact_fit() {
        let fit = fit_points(&[(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)]).unwrap();
        assert!(fit.slope_stderr < 1e-12);
        let fit = fit_points(&[(1.0, 1.0), (2.0, 0.7), (4.0, 0.25), (8.0, 0.2)]).unwrap();
        assert!(fit.slope_stderr > 0.0);
    }

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[1.0, 5.0, 9.0]) - 1.0).abs() < 1e-12);
    }
}
