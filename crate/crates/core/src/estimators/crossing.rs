//! Left-right crossing of the window, the finite-size stand-in for
//! percolation, and the critical-radius search built on it.

use serde::Serialize;

use super::McEstimate;
use crate::boolean_graph::{build_clusters, edge_to_edge_crossing, Axis};
use crate::error::{Error, Result};
use crate::par;
use crate::sampler::{sample, PointConfig, SamplerSpec, Window};
use crate::seed::stream_seed;

/// Replicas drawn once at one scale and reused for every radius, so that
/// crossing indicators are monotone in `r` replica by replica.
#[derive(Clone, Debug)]
pub struct CrossingSample {
    pub l: f64,
    pub configs: Vec<PointConfig>,
    pub master_seed: u64,
    pub stream_seed: u64,
}

impl CrossingSample {
    /// `n` replicas of `spec` on the window of half-width `l`, from the given
    /// replica stream.
    pub fn draw(spec: &SamplerSpec, l: f64, n: u64, stream: u64) -> Result<Self> {
        let s = spec.with_window(Window::centered(l)?).with_seed(stream);
        let configs = par::try_map_replicas(n, |i| sample(&s, i))?;
        Ok(CrossingSample {
            l,
            configs,
            master_seed: spec.master_seed,
            stream_seed: stream,
        })
    }

    pub fn crossings(&self, r: f64) -> Vec<bool> {
        par::map_slice(&self.configs, |c| {
            edge_to_edge_crossing(&build_clusters(c, r), c, Axis::Horizontal)
        })
    }

    pub fn estimate(&self, r: f64) -> McEstimate {
        McEstimate::from_hits(&self.crossings(r), self.master_seed, self.stream_seed)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("r > 0", format!("r = {r}")));
    }
    Ok(())
}

/// Fraction of `n` replicas on the window of half-width `l` with a
/// left-right crossing cluster at radius `r`.
pub fn estimate_crossing_prob(spec: &SamplerSpec, r: f64, l: f64, n: u64) -> Result<McEstimate> {
    check_radius(r)?;
    let stream = stream_seed(spec.master_seed, "percolate", 0);
    Ok(CrossingSample::draw(spec, l, n, stream)?.estimate(r))
}

/// Crossing estimates for several radii on shared replicas.
pub fn estimate_crossing_curve(spec: &SamplerSpec, radii: &[f64], l: f64, n: u64) -> Result<Vec<(f64, McEstimate)>> {
    for &r in radii {
        check_radius(r)?;
    }
    let stream = stream_seed(spec.master_seed, "percolate", 0);
    let sample = CrossingSample::draw(spec, l, n, stream)?;
    Ok(radii.iter().map(|&r| (r, sample.estimate(r))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RcStatus {
    /// The starting bracket at the largest scale had crossing intervals on
    /// both sides of the target.
    Conclusive,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RcStep {
    pub l: f64,
    pub r: f64,
    pub estimate: McEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RcEstimate {
    pub r_hat: f64,
    pub bracket: (f64, f64),
    /// Scale the final bracket refers to (the largest in the schedule).
    pub l: f64,
    pub target_prob: f64,
    pub status: RcStatus,
    /// Midpoint of the final bracket at each scale of the schedule.
    pub per_scale: Vec<(f64, f64)>,
    pub steps: Vec<RcStep>,
}

/// Crossing-probability threshold search: bisection on `r` for crossing
/// probability `0.5` at each scale of `l_schedule`, each scale warm-started
/// from the previous one. Returns the bracket at the largest scale.
pub fn estimate_critical_radius(
    spec: &SamplerSpec,
    l_schedule: &[f64],
    n_per_step: u64,
    tol: f64,
) -> Result<RcEstimate> {
    estimate_critical_radius_at(spec, l_schedule, n_per_step, tol, 0.5)
}

pub fn estimate_critical_radius_at(
    spec: &SamplerSpec,
    l_schedule: &[f64],
    n_per_step: u64,
    tol: f64,
    target: f64,
) -> Result<RcEstimate> {
    if l_schedule.is_empty() || l_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param(
            "L_schedule non-empty and increasing",
            format!("{l_schedule:?}"),
        ));
    }
    if !(tol > 0.0) || n_per_step == 0 || !(target > 0.0 && target < 1.0) {
        return Err(Error::param(
            "tol > 0, n_per_step >= 1, 0 < target < 1",
            format!("tol = {tol}, n = {n_per_step}, target = {target}"),
        ));
    }
    // mean-degree heuristic: Poisson percolates near intensity * pi * (2r)^2 = 4.5
    let guess = (4.5 / (4.0 * std::f64::consts::PI * spec.point_intensity())).sqrt();
    let mut steps = Vec::new();
    let mut per_scale = Vec::new();
    let mut prev: Option<f64> = None;
    let mut last = None;
    for (s, &l) in l_schedule.iter().enumerate() {
        let stream = stream_seed(spec.master_seed, "rc", s as u64);
        let sample = CrossingSample::draw(spec, l, n_per_step, stream)?;
        let mut probe = |r: f64| {
            let e = sample.estimate(r);
            steps.push(RcStep { l, r, estimate: e });
            e
        };
        let (mut lo, mut hi) = match prev {
            Some(r) => (0.8 * r, 1.25 * r),
            None => (0.25 * guess, 4.0 * guess),
        };
        let mut e_lo = probe(lo);
        let mut grow = 0;
        while e_lo.ci_high >= target && grow < 30 {
            hi = hi.min(lo);
            lo *= 0.5;
            e_lo = probe(lo);
            grow += 1;
        }
        let mut e_hi = probe(hi);
        grow = 0;
        while e_hi.ci_low <= target && grow < 30 {
            lo = lo.max(hi);
            hi *= 2.0;
            e_hi = probe(hi);
            grow += 1;
        }
        let separated = e_lo.ci_high < target && e_hi.ci_low > target;
        if !(e_lo.p_hat < target && e_hi.p_hat >= target) {
            return Err(Error::InsufficientData(format!(
                "no bracket at L = {l}: p({lo}) = {}, p({hi}) = {}",
                e_lo.p_hat, e_hi.p_hat
            )));
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if probe(mid).p_hat >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let r_hat = 0.5 * (lo + hi);
        per_scale.push((l, r_hat));
        prev = Some(r_hat);
        last = Some((l, lo, hi, r_hat, separated));
    }
    let (l, lo, hi, r_hat, separated) = last.expect("schedule is non-empty");
    Ok(RcEstimate {
        r_hat,
        bracket: (lo, hi),
        l,
        target_prob: target,
        status: if separated {
            RcStatus::Conclusive
        } else {
            RcStatus::Inconclusive
        },
        per_scale,
        steps,
    })
}
