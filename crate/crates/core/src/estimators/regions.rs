//! Hole and overcrowding events on disks and chains of standard squares.

use serde::{Deserialize, Serialize};

use super::McEstimate;
use crate::error::{Error, Result};
use crate::lattice::{square_of, Square};
use crate::par;
use crate::sampler::{sample, PointConfig, SamplerSpec, Window};
use crate::seed::stream_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    /// Open disk `B(0; radius)`.
    Disk { radius: f64 },
    /// Union of standard squares of side `theta`.
    SquareChain { theta: f64, squares: Vec<Square> },
}

impl Region {
    pub fn disk(radius: f64) -> Self {
        Region::Disk { radius }
    }

    /// `l` squares in the row `j = 0`, starting at `i = -floor(l / 2)`.
    pub fn horizontal_chain(theta: f64, l: usize) -> Self {
        let start = -((l / 2) as i64);
        Region::SquareChain {
            theta,
            squares: (start..start + l as i64).map(|i| (i, 0)).collect(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Disk { radius } => std::f64::consts::PI * radius * radius,
            Region::SquareChain { theta, squares } => theta * theta * squares.len() as f64,
        }
    }

    /// Largest sup-norm of a point of the closed region.
    pub fn sup_extent(&self) -> f64 {
        match self {
            Region::Disk { radius } => *radius,
            Region::SquareChain { theta, squares } => squares
                .iter()
                .map(|&(i, j)| {
                    let ext = |k: i64| (k as f64 * theta).abs().max(((k + 1) as f64 * theta).abs());
                    ext(i).max(ext(j))
                })
                .fold(0.0, f64::max),
        }
    }

    pub fn check_inside(&self, window: &Window) -> Result<()> {
        let valid = match self {
            Region::Disk { radius } => *radius >= 0.0,
            Region::SquareChain { theta, .. } => *theta > 0.0,
        };
        if !valid {
            return Err(Error::param("radius >= 0 and theta > 0", format!("{self:?}")));
        }
        if !window.is_centered_at_origin() || self.sup_extent() > window.half_width * (1.0 + 1e-12) {
            return Err(Error::param(
                "region inside sampling window",
                format!(
                    "region reaches sup-norm {} but the window half-width is {}",
                    self.sup_extent(),
                    window.half_width
                ),
            ));
        }
        Ok(())
    }

    fn square_counts(theta: f64, squares: &[Square], config: &PointConfig) -> Vec<usize> {
        let mut counts = vec![0; squares.len()];
        for p in &config.points {
            let s = square_of(p.x, p.y, theta);
            if let Some(k) = squares.iter().position(|&q| q == s) {
                counts[k] += 1;
            }
        }
        counts
    }

    /// No point of `config` lies in the region.
    pub fn is_hole(&self, config: &PointConfig) -> bool {
        match self {
            Region::Disk { radius } => config.points.iter().all(|p| p.norm() >= *radius),
            Region::SquareChain { theta, squares } => {
                Self::square_counts(*theta, squares, config).iter().all(|&c| c == 0)
            }
        }
    }

    /// Every square of the chain holds at least `k` points.
    pub fn is_overcrowded(&self, config: &PointConfig, k: usize) -> Result<bool> {
        match self {
            Region::SquareChain { theta, squares } => {
                Ok(Self::square_counts(*theta, squares, config).iter().all(|&c| c >= k))
            }
            Region::Disk { .. } => Err(Error::param("overcrowding region is a square chain", "got a disk")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum RegionEvent {
    Hole { region: Region },
    Overcrowd { region: Region, k: usize },
}

impl RegionEvent {
    pub fn region(&self) -> &Region {
        match self {
            RegionEvent::Hole { region } | RegionEvent::Overcrowd { region, .. } => region,
        }
    }

    pub fn occurs(&self, config: &PointConfig) -> Result<bool> {
        match self {
            RegionEvent::Hole { region } => Ok(region.is_hole(config)),
            RegionEvent::Overcrowd { region, k } => region.is_overcrowded(config, *k),
        }
    }
}

/// Estimates several region events on the same `n` replicas.
pub fn estimate_region_events(
    spec: &SamplerSpec,
    events: &[RegionEvent],
    n: u64,
    tag: &str,
) -> Result<Vec<McEstimate>> {
    for e in events {
        e.region().check_inside(&spec.window)?;
        if let RegionEvent::Overcrowd { region, .. } = e {
            if matches!(region, Region::Disk { .. }) {
                return Err(Error::param("overcrowding region is a square chain", "got a disk"));
            }
        }
    }
    let stream = stream_seed(spec.master_seed, tag, 0);
    let s = spec.with_seed(stream);
    let rows = par::try_map_replicas(n, |i| {
        let c = sample(&s, i)?;
        events.iter().map(|e| e.occurs(&c)).collect::<Result<Vec<bool>>>()
    })?;
    Ok((0..events.len())
        .map(|k| {
            let hits = rows.iter().filter(|r| r[k]).count() as u64;
            McEstimate::from_counts(hits, n, spec.master_seed, stream)
        })
        .collect())
}

/// Fraction of replicas with no point in `region`.
pub fn estimate_hole_probability(spec: &SamplerSpec, region: &Region, n: u64) -> Result<McEstimate> {
    let event = RegionEvent::Hole { region: region.clone() };
    Ok(estimate_region_events(spec, &[event], n, "hole")?[0])
}

/// Fraction of replicas in which every square of the chain holds at least
/// `k` points.
pub fn estimate_overcrowding_probability(spec: &SamplerSpec, region: &Region, k: usize, n: u64) -> Result<McEstimate> {
    let event = RegionEvent::Overcrowd {
        region: region.clone(),
        k,
    };
    if k == 0 {
        region.check_inside(&spec.window)?;
        let stream = stream_seed(spec.master_seed, "overcrowd", 0);
        return Ok(McEstimate::from_counts(n, n, spec.master_seed, stream));
    }
    Ok(estimate_region_events(spec, &[event], n, "overcrowd")?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Point;

    #[test]
    fn chain_layout() {
        assert_eq!(
            Region::horizontal_chain(2.0, 3),
            Region::SquareChain {
                theta: 2.0,
                squares: vec![(-1, 0), (0, 0), (1, 0)]
            }
        );
        assert_eq!(Region::horizontal_chain(2.0, 4).sup_extent(), 4.0);
        assert_eq!(Region::horizontal_chain(3.0, 1).sup_extent(), 3.0);
    }

    #[test]
    fn events_on_a_fixture() {
        let w = Window::centered(4.0).unwrap();
        let c = PointConfig::external(
            w,
            vec![Point::new(0.5, 0.5), Point::new(1.5, 1.0), Point::new(-1.0, 0.5)],
        )
        .unwrap();
        assert!(!Region::disk(1.0).is_hole(&c));
        assert!(Region::disk(0.5).is_hole(&c));
        let chain = Region::horizontal_chain(2.0, 2);
        assert!(!chain.is_hole(&c));
        assert!(chain.is_overcrowded(&c, 1).unwrap());
        assert!(!chain.is_overcrowded(&c, 2).unwrap());
        assert!(Region::disk(1.0).is_overcrowded(&c, 1).is_err());
    }

    #[test]
    fn region_must_fit() {
        let spec = SamplerSpec::poisson(1.0, Window::centered(2.0).unwrap(), 0);
        assert!(estimate_hole_probability(&spec, &Region::disk(2.5), 10).is_err());
        assert!(estimate_hole_probability(&spec, &Region::horizontal_chain(2.0, 3), 10).is_err());
    }

    #[test]
    fn degenerate_regions() {
        let spec = SamplerSpec::poisson(1.0, Window::centered(2.0).unwrap(), 0);
        assert_eq!(
            estimate_hole_probability(&spec, &Region::disk(0.0), 50).unwrap().p_hat,
            1.0
        );
        let chain = Region::horizontal_chain(2.0, 1);
        assert_eq!(
            estimate_overcrowding_probability(&spec, &chain, 0, 50).unwrap().p_hat,
            1.0
        );
    }
}
