use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{Point, PointConfig, ProcessKind, SamplerSpec, SeedLineage};
use crate::error::{Error, Result};
use crate::seed::replica_rng;

/// Homogeneous Poisson process of `spec.intensity` points per unit area,
/// uniform in the window. Deterministic in `(spec.master_seed, replica)`.
pub fn sample_poisson(spec: &SamplerSpec, replica: u64) -> Result<PointConfig> {
    if !(spec.intensity >= 0.0 && spec.intensity.is_finite()) {
        return Err(Error::param("intensity >= 0", format!("got {}", spec.intensity)));
    }
    let mut rng = replica_rng(spec.master_seed, replica);
    let mean = spec.intensity * spec.window.area();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::param("finite Poisson mean", e.to_string()))?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let (x0, x1) = spec.window.x_range();
    let (y0, y1) = spec.window.y_range();
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = x0 + (x1 - x0) * rng.random::<f64>();
        let y = y0 + (y1 - y0) * rng.random::<f64>();
        points.push(Point::new(x, y));
    }
    let cfg = PointConfig {
        window: spec.window,
        points,
        process: ProcessKind::Poisson,
        seed_lineage: Some(SeedLineage {
            master_seed: spec.master_seed,
            replica,
        }),
        model_order: None,
    };
    if cfg.has_coincident_points() {
        log::warn!("coincident Poisson points in replica {replica}; redrawing");
        let perturbed = SamplerSpec {
            master_seed: crate::seed::mix64(spec.master_seed),
            ..*spec
        };
        return sample_poisson(&perturbed, replica);
    }
    Ok(cfg)
}
