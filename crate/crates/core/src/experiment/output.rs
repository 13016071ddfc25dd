use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind, HoleShape, Params};
use crate::error::{Error, Result};
use crate::estimators::{DecayFit, McEstimate};

/// Header shared by every plot series file.
pub const PLOT_HEADER: [&str; 5] = ["scale", "value", "ci_low", "ci_high", "censored"];

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// One estimate in a results document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    /// Series name, e.g. `crossing` or `hole`.
    pub series: String,
    /// The swept parameter: radius, scale `L` or disk radius.
    pub scale: f64,
    pub estimate: McEstimate,
}

/// Results document of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Results {
    pub experiment_kind: ExperimentKind,
    pub process: super::ProcessConfig,
    pub params: Params,
    pub estimates: Vec<EstimateRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<DecayFit>,
    /// Kind-specific details (threshold search steps, verdict counts, ...).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub wall_time: f64,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub code_version: String,
}

impl Results {
    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Long-form CSV: one row per estimate.
    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["series", "scale", "p_hat", "ci_low", "ci_high", "n_hits", "n_samples"])?;
        for row in &self.estimates {
            let e = &row.estimate;
            w.write_record([
                row.series.clone(),
                row.scale.to_string(),
                e.p_hat.to_string(),
                e.ci_low.to_string(),
                e.ci_high.to_string(),
                e.n_hits.to_string(),
                e.n_samples.to_string(),
            ])?;
        }
        w.into_inner().map_err(|e| Error::io("results.csv", e.into_error()))
    }
}

fn series_csv(rows: &[&EstimateRow], log: bool) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PLOT_HEADER)?;
    for row in rows {
        let e = &row.estimate;
        let censored = log && e.n_hits == 0;
        let f = |x: f64| {
            if !log {
                x.to_string()
            } else if x > 0.0 {
                x.ln().to_string()
            } else {
                String::new()
            }
        };
        w.write_record([
            row.scale.to_string(),
            f(e.p_hat),
            f(e.ci_low),
            f(e.ci_high),
            u8::from(censored).to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::io("plot series", e.into_error()))
}

/// Writes the plotting series for `results` into `dir`: one tidy CSV per
/// curve with the columns of [`PLOT_HEADER`]. Log-scale series leave `value`
/// and `ci_low` empty on zero-hit rows and flag them as censored.
pub fn emit_plot_data(results: &Results, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut rows: Vec<&EstimateRow> = results.estimates.iter().collect();
    rows.sort_by(|a, b| a.scale.total_cmp(&b.scale));
    let pick = |series: &str| -> Vec<&EstimateRow> { rows.iter().copied().filter(|r| r.series == series).collect() };
    let files: Vec<(&str, Vec<&EstimateRow>, bool)> = match (&results.experiment_kind, &results.params) {
        (ExperimentKind::Percolate, _) | (ExperimentKind::Rc, _) => {
            vec![("crossing_vs_r.csv", pick("crossing"), false)]
        }
        (
            ExperimentKind::Hole,
            Params::Hole {
                shape: HoleShape::Chain,
                ..
            },
        ) => {
            vec![("log_hole_vs_L.csv", pick("hole"), true)]
        }
        (ExperimentKind::Hole, _) => vec![("log_hole_vs_R.csv", pick("hole"), true)],
        (ExperimentKind::Overcrowd, _) => vec![("log_overcrowd_vs_L.csv", pick("overcrowd"), true)],
        (ExperimentKind::Unique, _) => vec![("multi_cluster_vs_L.csv", pick("multi_cluster"), false)],
        (ExperimentKind::FieldMin, _) => vec![("field_min_vs_R.csv", pick("field_min"), false)],
        (ExperimentKind::Sample, _) | (ExperimentKind::VerifyDiscr1, _) | (ExperimentKind::VerifyDiscr2, _) => {
            Vec::new()
        }
    };
    let mut written = Vec::new();
    for (name, series, log) in files {
        if series.is_empty() {
            return Err(Error::InsufficientData(format!("no estimates for {name}")));
        }
        let path = dir.join(name);
        write_atomic(&path, &series_csv(&series, log)?)?;
        written.push(path);
    }
    Ok(written)
}

/// Machine-readable error document.
pub fn error_json(err: &Error) -> Value {
    let mut doc = serde_json::json!({
        "error": err.kind(),
        "message": err.to_string(),
    });
    match err {
        Error::Parameter { constraint, .. } => {
            doc["constraint"] = Value::String(constraint.clone());
        }
        Error::Config(list) => {
            doc["errors"] = serde_json::to_value(list).expect("strings serialize");
        }
        _ => {}
    }
    doc
}
