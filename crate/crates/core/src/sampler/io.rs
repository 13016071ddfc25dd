//! Points CSV (`x,y`, 17 significant digits) and its JSON sidecar.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Point, PointConfig, ProcessKind, Window};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMetadata {
    pub process: ProcessKind,
    pub window: Window,
    pub seed: Option<u64>,
    pub replica: Option<u64>,
    pub n: Option<usize>,
}

impl From<&PointConfig> for PointMetadata {
    fn from(cfg: &PointConfig) -> Self {
        PointMetadata {
            process: cfg.process,
            window: cfg.window,
            seed: cfg.seed_lineage.map(|s| s.master_seed),
            replica: cfg.seed_lineage.map(|s| s.replica),
            n: cfg.model_order,
        }
    }
}

pub fn format_coord(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `<path>` as CSV and `<path>.json` as the metadata sidecar.
pub fn write_points_csv(cfg: &PointConfig, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["x", "y"])?;
    for p in &cfg.points {
        wtr.write_record([format_coord(p.x), format_coord(p.y)])?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    crate::experiment::write_atomic(path, &bytes)?;
    let meta = serde_json::to_vec_pretty(&PointMetadata::from(cfg))?;
    crate::experiment::write_atomic(&sidecar_path(path), &meta)
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

/// Reads a points CSV and its sidecar back into a configuration.
pub fn read_points_csv(path: &Path) -> Result<PointConfig> {
    let meta: PointMetadata = {
        let side = sidecar_path(path);
        let text = std::fs::read(&side).map_err(|e| Error::io(&side, e))?;
        serde_json::from_slice(&text)?
    };
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "y"] {
        return Err(Error::Config(vec![format!("{}: header must be x,y", path.display())]));
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(vec![format!("{}: bad coordinate {:?}: {e}", path.display(), &rec[i])]))
        };
        points.push(Point::new(parse(0)?, parse(1)?));
    }
    Ok(PointConfig {
        window: meta.window,
        points,
        process: meta.process,
        seed_lineage: match (meta.seed, meta.replica) {
            (Some(master_seed), Some(replica)) => Some(super::SeedLineage { master_seed, replica }),
            _ => None,
        },
        model_order: meta.n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_poisson, SamplerSpec};

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SamplerSpec::poisson(1.0, Window::centered(3.0).unwrap(), 12);
        let cfg = sample_poisson(&spec, 2).unwrap();
        let path = dir.path().join("pts.csv");
        write_points_csv(&cfg, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x,y\n"));
        let back = read_points_csv(&path).unwrap();
        assert_eq!(back, cfg);
    }
}
