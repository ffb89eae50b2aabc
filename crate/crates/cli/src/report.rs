use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use phasefit::harness::{emit_plot_data, fmt_f64, group_statistics, read_records, ExperimentRecord, GroupBy, Statistic};
use phasefit::Error;

use crate::{runtime, CmdResult, Failure};

/// Writes `<solver>__<noise>.dat` (plus `.slope`) per group and `summary.txt`.
pub fn run(records_path: &Path, out_dir: &Path) -> CmdResult {
    let records = read_records(records_path).map_err(|e| match e {
        Error::Io { .. } => Failure::Usage(e.to_string()),
        other => Failure::Usage(format!("{}: {other}", records_path.display())),
    })?;
    if records.is_empty() {
        return Err(Failure::Usage(format!("no records in {}", records_path.display())));
    }
    fs::create_dir_all(out_dir).map_err(|e| Failure::Runtime(format!("{}: {e}", out_dir.display())))?;

    let mut groups: BTreeMap<(String, String), Vec<ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.solver.clone(), r.noise_kind.clone()))
            .or_default()
            .push(r);
    }

    let mut summary = String::new();
    for ((solver, noise), recs) in &groups {
        let name = format!("{}__{}.dat", sanitize(solver), sanitize(noise));
        let fit = emit_plot_data(recs, GroupBy::M, Statistic::Median, out_dir.join(&name)).map_err(runtime)?;
        let min = recs.iter().map(|r| r.dist).fold(f64::INFINITY, f64::min);
        writeln!(summary, "[{solver} / {noise}] -> {name}").unwrap();
        writeln!(summary, "{:>8} {:>24} {:>24} {:>6}", "m", "median_dist", "min_dist", "trials").unwrap();
        for g in group_statistics(recs, GroupBy::M, Statistic::Median) {
            writeln!(summary, "{:>8} {:>24} {:>24} {:>6}", g.key, fmt_f64(g.value), fmt_f64(g.min), g.count).unwrap();
        }
        match fit {
            Some(f) => writeln!(
                summary,
                "slope={} r2={} points={}",
                fmt_f64(f.slope),
                fmt_f64(f.r_squared),
                f.points
            )
            .unwrap(),
            None => writeln!(summary, "slope=NaN").unwrap(),
        }
        writeln!(summary, "min_dist={}\n", fmt_f64(min)).unwrap();
    }
    let path = out_dir.join("summary.txt");
    fs::write(&path, &summary).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}
