//! Small values of the normalized GAF on a circle.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::McEstimate;
use crate::error::{Error, Result};
use crate::par;
use crate::sampler::{GafPolynomial, DEFAULT_BUFFER};
use crate::seed::{replica_rng, stream_seed};

/// Contour refinement policy for the circle minimum.
#[derive(Clone, Copy, Debug)]
pub struct CircleMinOptions {
    pub start_nodes: usize,
    /// Stop once a doubling lowers the minimum by less than this fraction.
    pub rel_change: f64,
    pub max_nodes: usize,
}

impl Default for CircleMinOptions {
    fn default() -> Self {
        CircleMinOptions {
            start_nodes: 256,
            rel_change: 0.01,
            max_nodes: 1 << 20,
        }
    }
}

/// Minimum of `|f*|` over equispaced nodes of the circle `|z| = radius`,
/// doubling the node count until the minimum settles. Refinement also stops
/// as soon as the minimum drops to `stop_below`. Returns the minimum and the
/// final node count.
pub fn circle_min_abs(poly: &GafPolynomial, radius: f64, opts: &CircleMinOptions, stop_below: f64) -> (f64, usize) {
    let at = |j: usize, nodes: usize| {
        poly.evaluate_normalized(Complex64::from_polar(radius, TAU * j as f64 / nodes as f64))
            .norm()
    };
    let mut nodes = opts.start_nodes.max(1);
    let mut min = (0..nodes).map(|j| at(j, nodes)).fold(f64::INFINITY, f64::min);
    while min > stop_below && 2 * nodes <= opts.max_nodes {
        let finer = 2 * nodes;
        // only the new (odd) nodes need evaluating
        let new_min = (0..nodes).map(|j| at(2 * j + 1, finer)).fold(min, f64::min);
        nodes = finer;
        let settled = new_min >= (1.0 - opts.rel_change) * min;
        min = new_min;
        if settled {
            break;
        }
    }
    (min, nodes)
}

/// Fraction of `n` replicas of `f_n`, `n = ceil((R + 5)^2)`, whose normalized
/// modulus drops to `exp(-nu R^2)` somewhere on the circle `|z| = R`.
pub fn estimate_field_min_tail(nu: f64, radius: f64, n: u64, master_seed: u64) -> Result<McEstimate> {
    estimate_field_min_tail_with(nu, radius, n, master_seed, &CircleMinOptions::default())
}

pub fn estimate_field_min_tail_with(
    nu: f64,
    radius: f64,
    n: u64,
    master_seed: u64,
    opts: &CircleMinOptions,
) -> Result<McEstimate> {
    if !(nu > 2.0) || !(radius > 1.0) {
        return Err(Error::param("nu > 2 and R > 1", format!("nu = {nu}, R = {radius}")));
    }
    let degree = ((radius + DEFAULT_BUFFER).powi(2)).ceil() as usize;
    let threshold = (-nu * radius * radius).exp();
    let stream = stream_seed(master_seed, "fieldmin", 0);
    let hits = par::map_replicas(n, |i| {
        let poly = GafPolynomial::sample(degree, &mut replica_rng(stream, i));
        circle_min_abs(&poly, radius, opts, threshold).0 <= threshold
    });
    Ok(McEstimate::from_hits(&hits, master_seed, stream))
}
