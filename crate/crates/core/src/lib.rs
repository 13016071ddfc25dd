//! Continuum (Boolean/Gilbert) percolation on planar point processes.
//!
//! Three point processes are supported: a homogeneous Poisson baseline, the
//! Ginibre ensemble (eigenvalues of complex Gaussian matrices) and the zero
//! set of the planar Gaussian analytic function. On top of the samplers sit
//! the disk-graph clustering, a standard-square lattice discretization and a
//! set of Monte Carlo estimators for crossing, hole, overcrowding and
//! uniqueness events.
//!
//! Replicas are independent given their seeds, so every estimator fans out
//! over replicas with rayon when the `parallel` feature is on (the default)
//! and runs sequentially otherwise. Results do not depend on the thread count.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boolean_graph;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod lattice;
pub mod par;
pub mod sampler;
pub mod seed;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use boolean_graph::{build_clusters, Axis, ClusterLabeling};
pub use estimators::{DecayFit, McEstimate, RcEstimate};
pub use lattice::{LatticePath, OccupancyGrid};
pub use sampler::{GafPolynomial, Point, PointConfig, ProcessKind, SamplerSpec, SeedLineage, Window};

/// Version string embedded in every results document.
pub const CODE_VERSION: &str = concat!("contperc ", env!("CARGO_PKG_VERSION"));
