//! Flat-file artifacts: `report.json`, `forward.csv`, `reverse.csv` and
//! `curves.csv`.

use std::fs;
use std::path::Path;

use curvtherm::{ProtocolReport, WorkDistribution};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::ScenarioResult;
use crate::runners::{Curves, RunArtifacts};

#[derive(Serialize)]
struct ReportJson {
    beta: f64,
    delta_f: f64,
    mean_work: f64,
    jarzynski_lhs: f64,
    jarzynski_rhs: f64,
    crooks_max_residual: f64,
    entropy_production: f64,
    dissipated_work: f64,
}

impl From<&ProtocolReport> for ReportJson {
    fn from(r: &ProtocolReport) -> Self {
        Self {
            beta: r.beta,
            delta_f: r.delta_f,
            mean_work: r.mean_work,
            jarzynski_lhs: r.jarzynski_lhs,
            jarzynski_rhs: r.jarzynski_rhs,
            crooks_max_residual: r.crooks_max_residual,
            entropy_production: r.entropy_production,
            dissipated_work: r.dissipated_work,
        }
    }
}

/// JSON document written to `report.json`.
pub fn report_json(art: &RunArtifacts) -> ScenarioResult<Value> {
    Ok(json!({
        "scenario": art.config.scenario,
        "report": ReportJson::from(&art.report),
        "details": art.details,
        "sampling": art.sampling,
        "metadata": {
            "config": art.config,
            "version": env!("CARGO_PKG_VERSION"),
            "core_version": curvtherm::VERSION,
            "diagnostics": art.diagnostics,
        },
    }))
}

/// Shortest round-trip representation, switching to exponent form for very
/// small or large magnitudes.
fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn write_distribution(path: &Path, dist: &WorkDistribution) -> ScenarioResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["work", "probability"])?;
    for p in dist.points() {
        w.write_record([fmt_num(p.work), fmt_num(p.probability)])?;
    }
    w.flush()?;
    Ok(())
}

fn write_curves(path: &Path, curves: &Curves) -> ScenarioResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    let header: Vec<&str> = std::iter::once(curves.x_label.as_str())
        .chain(curves.series.iter().map(|(n, _)| n.as_str()))
        .collect();
    w.write_record(&header)?;
    for (k, x) in curves.x.iter().enumerate() {
        let row: Vec<String> = std::iter::once(fmt_num(*x))
            .chain(curves.series.iter().map(|(_, v)| fmt_num(v[k])))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Write all artifacts into `dir`, creating it if needed.
pub fn write_artifacts(art: &RunArtifacts, dir: &Path) -> ScenarioResult<()> {
    fs::create_dir_all(dir)?;
    let report = serde_json::to_string_pretty(&report_json(art)?)?;
    fs::write(dir.join("report.json"), report + "\n")?;
    write_distribution(&dir.join("forward.csv"), &art.forward)?;
    write_distribution(&dir.join("reverse.csv"), &art.reverse)?;
    write_curves(&dir.join("curves.csv"), &art.curves)?;
    Ok(())
}
