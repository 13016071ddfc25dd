use faer::Mat;
use num_complex::Complex64;
use rand::Rng;

use super::{standard_complex_gaussian, Point, PointConfig, ProcessKind, SamplerSpec, SeedLineage};
use crate::error::{Error, Result};
use crate::seed::{mix64, replica_rng};

const MAX_REDRAWS: usize = 8;

/// Eigenvalues of an `n x n` matrix with i.i.d. standard complex Gaussian
/// entries.
pub fn ginibre_eigenvalues<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    // column-major fill keeps the draw order independent of faer internals
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        entries.push(standard_complex_gaussian(rng));
    }
    let m = Mat::<Complex64>::from_fn(n, n, |i, j| entries[j * n + i]);
    m.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// Bulk approximation of the infinite Ginibre ensemble: eigenvalues of the
/// finite model of order `spec.model_order()`, restricted to the window.
pub fn sample_ginibre(spec: &SamplerSpec, replica: u64) -> Result<PointConfig> {
    spec.check_bulk()?;
    let n = spec.model_order();
    let mut seed = spec.master_seed;
    for attempt in 0..MAX_REDRAWS {
        let mut rng = replica_rng(seed, replica);
        let eig = match ginibre_eigenvalues(n, &mut rng) {
            Ok(e) => e,
            Err(err) => {
                log::warn!("ginibre replica {replica} attempt {attempt}: {err}; redrawing");
                seed = mix64(seed ^ 0x5EED);
                continue;
            }
        };
        let points: Vec<Point> = eig
            .iter()
            .map(|z| Point::new(z.re, z.im))
            .filter(|p| spec.window.contains(p))
            .collect();
        let cfg = PointConfig {
            window: spec.window,
            points,
            process: ProcessKind::Ginibre,
            seed_lineage: Some(SeedLineage {
                master_seed: spec.master_seed,
                replica,
            }),
            model_order: Some(n),
        };
        if !cfg.points.iter().all(|p| p.x.is_finite() && p.y.is_finite()) || cfg.has_coincident_points() {
            log::warn!("ginibre replica {replica} attempt {attempt}: degenerate spectrum; redrawing");
            seed = mix64(seed ^ 0x5EED);
            continue;
        }
        return Ok(cfg);
    }
    Err(Error::Eigen(format!(
        "replica {replica}: no valid spectrum after {MAX_REDRAWS} draws"
    )))
}
