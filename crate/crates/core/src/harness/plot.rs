use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::fit::{fit_points, group_statistics, GroupBy, SlopeFit, Statistic};
use super::records::{fmt_f64, ExperimentRecord};
use crate::error::{Error, Result};

/// Path of the fit sidecar written next to a plot data file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".slope");
    PathBuf::from(s)
}

/// Renders `(x, y, yerr)` rows, one per group, under a `#` header.
pub fn plot_data(records: &[ExperimentRecord], group_by: GroupBy, statistic: Statistic) -> Result<(String, Result<SlopeFit>)> {
    if records.is_empty() {
        return Err(Error::Empty("no records to plot"));
    }
    let stats = group_statistics(records, group_by, statistic);
    let mut out = String::new();
    writeln!(out, "# dist vs {} ({statistic} over trials)", group_by.name()).unwrap();
    writeln!(out, "# x y yerr").unwrap();
    for g in &stats {
        writeln!(out, "{} {} {}", g.key, fmt_f64(g.value), fmt_f64(g.stderr)).unwrap();
    }
    let pts: Vec<(f64, f64)> = stats.iter().map(|g| (g.key as f64, g.value)).collect();
    Ok((out, fit_points(&pts)))
}

pub fn sidecar_text(fit: &Result<SlopeFit>) -> String {
    match fit {
        Ok(f) => format!(
            "slope={} intercept={} r2={} points={} slope_stderr={}\n",
            fmt_f64(f.slope),
            fmt_f64(f.intercept),
            fmt_f64(f.r_squared),
            f.points,
            fmt_f64(f.slope_stderr)
        ),
        Err(e) => format!("# no fit: {e}\nslope=NaN\n"),
    }
}

/// Writes plot data to `path` and the slope sidecar to `<path>.slope`.
pub fn emit_plot_data(
    records: &[ExperimentRecord],
    group_by: GroupBy,
    statistic: Statistic,
    path: impl AsRef<Path>,
) -> Result<Option<SlopeFit>> {
    let path = path.as_ref();
    let (data, fit) = plot_data(records, group_by, statistic)?;
    fs::write(path, data).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    fs::write(&side, sidecar_text(&fit)).map_err(|e| Error::io(&side, e))?;
    Ok(fit.ok())
}
