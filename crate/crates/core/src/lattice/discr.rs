//! Executable forms of the two discretization propositions.

use serde::Serialize;

use super::{find_k_full_lattice_path, occupancy, Square};
use crate::boolean_graph::{build_clusters, origin_connected_to_box};
use crate::error::{Error, Result};
use crate::sampler::PointConfig;

/// Outcome of one implication check on one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub premise_holds: bool,
    pub conclusion_holds: bool,
    /// Lattice path involved in the check, when one was found.
    pub witness_path: Option<Vec<Square>>,
    pub theta: f64,
    pub r: f64,
    pub k: u32,
    pub l: i64,
}

impl Verdict {
    /// The implication premise => conclusion holds (vacuously if the premise fails).
    pub fn holds(&self) -> bool {
        !self.premise_holds || self.conclusion_holds
    }

    pub fn is_counterexample(&self) -> bool {
        !self.holds()
    }
}

fn continuum_connected(config: &PointConfig, r: f64, big_r: f64) -> Result<bool> {
    let labeling = build_clusters(config, r);
    origin_connected_to_box(&labeling, config, big_r)
}

/// With `theta = r / sqrt(5)`: an occupied non-repeating lattice path from
/// the origin to `W_{L theta}` must come with a continuum path at radius `r`.
pub fn verify_discr1(config: &PointConfig, r: f64, l: i64) -> Result<Verdict> {
    if !(r > 0.0) || l < 1 {
        return Err(Error::param("r > 0 and L >= 1", format!("r = {r}, L = {l}")));
    }
    let theta = r / 5f64.sqrt();
    let grid = occupancy(config, theta);
    let path = find_k_full_lattice_path(&grid, 1, l);
    let premise_holds = path.is_some();
    let conclusion_holds = continuum_connected(config, r, l as f64 * theta)?;
    Ok(Verdict {
        premise_holds,
        conclusion_holds,
        witness_path: path.map(|p| p.squares),
        theta,
        r,
        k: 1,
        l,
    })
}

/// For `0 < r < theta / (18 k)`: a continuum path from the origin to
/// `W_{L theta}` must come with a k-full non-repeating lattice path.
pub fn verify_discr2(config: &PointConfig, r: f64, theta: f64, k: u32, l: i64) -> Result<Verdict> {
    if !(r > 0.0 && theta > 0.0) || l < 1 {
        return Err(Error::param(
            "r > 0, theta > 0 and L >= 1",
            format!("r = {r}, theta = {theta}, L = {l}"),
        ));
    }
    if k > 0 && !(r < theta / (18.0 * k as f64)) {
        return Err(Error::param(
            "r < theta/(18k)",
            format!("r = {r}, theta = {theta}, k = {k}"),
        ));
    }
    let premise_holds = continuum_connected(config, r, l as f64 * theta)?;
    let grid = occupancy(config, theta);
    let path = find_k_full_lattice_path(&grid, k, l);
    Ok(Verdict {
        premise_holds,
        conclusion_holds: path.is_some(),
        witness_path: path.map(|p| p.squares),
        theta,
        r,
        k,
        l,
    })
}
