//! Point-process samplers and the shared point-configuration type.

mod gaf;
mod ginibre;
mod io;
mod poisson;
pub mod roots;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gaf::{evaluate_normalized_gaf, GafPolynomial, ScaledValue};
pub use ginibre::{ginibre_eigenvalues, sample_ginibre};
pub use io::{read_points_csv, write_points_csv, PointMetadata};
pub use poisson::sample_poisson;
pub use roots::{find_polynomial_roots, sample_gaf_zeros, RootFinder};

/// Default bulk margin around the window for the finite Ginibre and GAF models.
pub const DEFAULT_BUFFER: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_inf(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Closed axis-aligned square `center ± half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Point,
    pub half_width: f64,
}

impl Window {
    pub fn new(center: Point, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::param("half_width > 0", format!("got {half_width}")));
        }
        Ok(Window { center, half_width })
    }

    /// Window centred at the origin.
    pub fn centered(half_width: f64) -> Result<Self> {
        Self::new(Point::new(0.0, 0.0), half_width)
    }

    pub fn area(&self) -> f64 {
        let side = 2.0 * self.half_width;
        side * side
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.center.x - self.half_width, self.center.x + self.half_width)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.center.y - self.half_width, self.center.y + self.half_width)
    }

    pub fn contains(&self, p: &Point) -> bool {
        (p.x - self.center.x).abs() <= self.half_width && (p.y - self.center.y).abs() <= self.half_width
    }

    /// Largest distance from the origin to a point of the window.
    pub fn circumradius(&self) -> f64 {
        let (x0, x1) = self.x_range();
        let (y0, y1) = self.y_range();
        x0.abs().max(x1.abs()).hypot(y0.abs().max(y1.abs()))
    }

    pub fn is_centered_at_origin(&self) -> bool {
        self.center.x == 0.0 && self.center.y == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Poisson,
    Ginibre,
    Gaf,
    External,
}

impl ProcessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProcessKind::Poisson => "poisson",
            ProcessKind::Ginibre => "ginibre",
            ProcessKind::Gaf => "gaf",
            ProcessKind::External => "external",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLineage {
    pub master_seed: u64,
    pub replica: u64,
}

/// A finite configuration of distinct points inside a closed window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub window: Window,
    pub points: Vec<Point>,
    pub process: ProcessKind,
    pub seed_lineage: Option<SeedLineage>,
    /// Matrix order or polynomial degree of the finite model, if any.
    pub model_order: Option<usize>,
}

impl PointConfig {
    /// Wraps externally supplied points. Points outside the window or repeated
    /// points are rejected.
    pub fn external(window: Window, points: Vec<Point>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !window.contains(p)) {
            return Err(Error::param(
                "points inside window",
                format!("({}, {}) lies outside", p.x, p.y),
            ));
        }
        let cfg = PointConfig {
            window,
            points,
            process: ProcessKind::External,
            seed_lineage: None,
            model_order: None,
        };
        if cfg.has_coincident_points() {
            return Err(Error::param("points pairwise distinct", "duplicate point"));
        }
        Ok(cfg)
    }

    pub fn empty(window: Window) -> Self {
        PointConfig {
            window,
            points: Vec::new(),
            process: ProcessKind::External,
            seed_lineage: None,
            model_order: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn has_coincident_points(&self) -> bool {
        let mut sorted: Vec<(u64, u64)> = self.points.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    /// Scales every coordinate (and the window) by `s > 0` about the origin.
    pub fn scaled(&self, s: f64) -> PointConfig {
        let mut out = self.clone();
        out.window.center = Point::new(s * self.window.center.x, s * self.window.center.y);
        out.window.half_width *= s;
        for p in &mut out.points {
            p.x *= s;
            p.y *= s;
        }
        out
    }
}

/// Everything a sampler needs to produce a replica.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub process: ProcessKind,
    /// Points per unit area; only used by the Poisson sampler.
    pub intensity: f64,
    pub window: Window,
    pub buffer: f64,
    pub master_seed: u64,
}

impl SamplerSpec {
    pub fn poisson(intensity: f64, window: Window, master_seed: u64) -> Self {
        SamplerSpec {
            process: ProcessKind::Poisson,
            intensity,
            window,
            buffer: 0.0,
            master_seed,
        }
    }

    pub fn ginibre(window: Window, master_seed: u64) -> Self {
        SamplerSpec {
            process: ProcessKind::Ginibre,
            intensity: std::f64::consts::FRAC_1_PI,
            window,
            buffer: DEFAULT_BUFFER,
            master_seed,
        }
    }

    pub fn gaf(window: Window, master_seed: u64) -> Self {
        SamplerSpec {
            process: ProcessKind::Gaf,
            intensity: std::f64::consts::FRAC_1_PI,
            window,
            buffer: DEFAULT_BUFFER,
            master_seed,
        }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    /// Mean number of points per unit area of the target process.
    pub fn point_intensity(&self) -> f64 {
        match self.process {
            ProcessKind::Poisson | ProcessKind::External => self.intensity,
            ProcessKind::Ginibre | ProcessKind::Gaf => std::f64::consts::FRAC_1_PI,
        }
    }

    /// Matrix order / polynomial degree `ceil((R + buffer)^2)` where `R` is the
    /// window circumradius about the origin.
    pub fn model_order(&self) -> usize {
        let r = self.window.circumradius() + self.buffer;
        ((r * r).ceil() as usize).max(1)
    }

    pub(crate) fn check_bulk(&self) -> Result<()> {
        if !self.window.is_centered_at_origin() {
            return Err(Error::param(
                "window centered at origin",
                format!("{} sampling needs a window at the origin", self.process.as_str()),
            ));
        }
        if !(self.buffer >= 0.0) {
            return Err(Error::param("buffer >= 0", format!("got {}", self.buffer)));
        }
        Ok(())
    }
}

/// Draws replica `replica` of the process described by `spec`.
pub fn sample(spec: &SamplerSpec, replica: u64) -> Result<PointConfig> {
    match spec.process {
        ProcessKind::Poisson => sample_poisson(spec, replica),
        ProcessKind::Ginibre => sample_ginibre(spec, replica),
        ProcessKind::Gaf => sample_gaf_zeros(spec, replica),
        ProcessKind::External => Err(Error::param(
            "process in {poisson, ginibre, gaf}",
            "external configurations cannot be sampled",
        )),
    }
}

/// Standard complex Gaussian: independent N(0, 1/2) real and imaginary parts.
pub(crate) fn standard_complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    use rand_distr::StandardNormal;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    num_complex::Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
