//! Monte Carlo estimators for crossing, threshold, hole, overcrowding,
//! uniqueness and field-minimum events. Every estimator draws its replicas
//! from a seed stream derived from the master seed, so results are a pure
//! function of the inputs whatever the thread count.

mod crossing;
mod decay;
mod field_min;
mod mc;
mod regions;
mod uniqueness;

pub use crossing::{
    estimate_critical_radius, estimate_critical_radius_at, estimate_crossing_curve, estimate_crossing_prob,
    CrossingSample, RcEstimate, RcStatus, RcStep,
};
pub use decay::{decay_points, fit_exponential_decay, fit_log_linear, DecayFit, DecayPoint};
pub use field_min::{circle_min_abs, estimate_field_min_tail, estimate_field_min_tail_with, CircleMinOptions};
pub use mc::{wilson_interval, McEstimate, WILSON_Z};
pub use regions::{
    estimate_hole_probability, estimate_overcrowding_probability, estimate_region_events, Region, RegionEvent,
};
pub use uniqueness::{annulus_for, estimate_uniqueness_curve};
