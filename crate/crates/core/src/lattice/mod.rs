//! Standard-square discretization: occupancy counts on the grid `theta Z^2`,
//! k-full lattice paths, empty circuits around the origin, and executable
//! checks of the two discretization propositions.
//!
//! Square `(i, j)` is `[i theta, (i+1) theta) x [j theta, (j+1) theta)`. The
//! four squares whose closures contain the origin are `(-1..=0, -1..=0)`, and
//! the box `B_{L theta}` is covered by the squares with `i, j` in
//! `[-L, L-1]`; those with an index equal to `-L` or `L-1` touch `W_{L theta}`.

mod circuit;
mod discr;

use std::collections::VecDeque;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::sampler::PointConfig;

pub use circuit::exists_empty_circuit;
pub use discr::{verify_discr1, verify_discr2, Verdict};

pub type Square = (i64, i64);

/// The four squares whose closures contain the origin.
pub const ORIGIN_SQUARES: [Square; 4] = [(-1, -1), (-1, 0), (0, -1), (0, 0)];

/// Per-square point counts over a rectangular index range. Squares outside
/// the range count as empty.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyGrid {
    theta: f64,
    i_min: i64,
    j_min: i64,
    nx: usize,
    ny: usize,
    counts: Vec<u32>,
}

impl OccupancyGrid {
    /// Grid from explicit row-major counts (`counts[(j - j_min) * nx + (i - i_min)]`).
    pub fn from_counts(theta: f64, i_min: i64, j_min: i64, nx: usize, ny: usize, counts: Vec<u32>) -> Self {
        assert!(theta > 0.0, "theta must be positive");
        assert_eq!(counts.len(), nx * ny, "counts must have nx * ny entries");
        OccupancyGrid {
            theta,
            i_min,
            j_min,
            nx,
            ny,
            counts,
        }
    }

    /// Grid covering exactly the squares of `B_{L theta}`, filled by `f(i, j)`.
    pub fn from_fn(theta: f64, l: i64, mut f: impl FnMut(i64, i64) -> u32) -> Self {
        let side = (2 * l) as usize;
        let mut counts = Vec::with_capacity(side * side);
        for j in -l..l {
            for i in -l..l {
                counts.push(f(i, j));
            }
        }
        Self::from_counts(theta, -l, -l, side, side, counts)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Inclusive index bounds `((i_min, i_max), (j_min, j_max))`.
    pub fn extent(&self) -> ((i64, i64), (i64, i64)) {
        (
            (self.i_min, self.i_min + self.nx as i64 - 1),
            (self.j_min, self.j_min + self.ny as i64 - 1),
        )
    }

    pub fn count(&self, sq: Square) -> u32 {
        let (i, j) = (sq.0 - self.i_min, sq.1 - self.j_min);
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return 0;
        }
        self.counts[j as usize * self.nx + i as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Nonzero cells as `(i, j, count)`, row by row.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, i64, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (self.i_min + (k % self.nx) as i64, self.j_min + (k / self.nx) as i64, c))
    }

    /// Grid dump: CSV rows `i,j,count` over the whole extent.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["i", "j", "count"])?;
        for (k, c) in self.counts.iter().enumerate() {
            let i = self.i_min + (k % self.nx) as i64;
            let j = self.j_min + (k / self.nx) as i64;
            wtr.write_record([i.to_string(), j.to_string(), c.to_string()])?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| crate::error::Error::io(path, e.into_error()))?;
        crate::experiment::write_atomic(path, &bytes)
    }
}

/// Square containing `(x, y)` under the half-open convention.
pub fn square_of(x: f64, y: f64, theta: f64) -> Square {
    ((x / theta).floor() as i64, (y / theta).floor() as i64)
}

/// Counts of points per standard square of side `theta`, over an extent
/// covering the configuration's window.
pub fn occupancy(config: &PointConfig, theta: f64) -> OccupancyGrid {
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive, got {theta}");
    let (x0, x1) = config.window.x_range();
    let (y0, y1) = config.window.y_range();
    let (i_min, j_min) = square_of(x0, y0, theta);
    let (i_max, j_max) = square_of(x1, y1, theta);
    let nx = (i_max - i_min + 1) as usize;
    let ny = (j_max - j_min + 1) as usize;
    let mut counts = vec![0u32; nx * ny];
    for p in &config.points {
        let (i, j) = square_of(p.x, p.y, theta);
        counts[(j - j_min) as usize * nx + (i - i_min) as usize] += 1;
    }
    OccupancyGrid {
        theta,
        i_min,
        j_min,
        nx,
        ny,
        counts,
    }
}

pub fn are_neighbours(a: Square, b: Square) -> bool {
    a != b && (a.0 - b.0).abs() <= 1 && (a.1 - b.1).abs() <= 1
}

/// Whether square `sq` of `B_{L theta}` touches `W_{L theta}`.
pub fn touches_box_boundary(sq: Square, l: i64) -> bool {
    sq.0 == -l || sq.0 == l - 1 || sq.1 == -l || sq.1 == l - 1
}

pub fn in_box(sq: Square, l: i64) -> bool {
    (-l..l).contains(&sq.0) && (-l..l).contains(&sq.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePath {
    pub squares: Vec<Square>,
    /// Every square of the path holds at least this many points.
    pub k: u32,
}

impl LatticePath {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Consecutive squares are 8-neighbours.
    pub fn is_connected(&self) -> bool {
        self.squares.windows(2).all(|w| are_neighbours(w[0], w[1]))
    }

    pub fn is_non_repeating(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.squares.iter().all(|s| seen.insert(*s))
    }

    pub fn is_k_full(&self, grid: &OccupancyGrid, k: u32) -> bool {
        self.squares.iter().all(|&s| grid.count(s) >= k)
    }
}

/// Shortest non-repeating 8-connected path of squares holding `>= k` points,
/// from an origin square to a square touching `W_{L theta}`, or `None` when
/// breadth-first search over `B_{L theta}` finds none.
///
/// Leaving `B_{L theta}` never helps: a path must cross a boundary-touching
/// square of the box before it can get outside.
pub fn find_k_full_lattice_path(grid: &OccupancyGrid, k: u32, l: i64) -> Option<LatticePath> {
    assert!(l >= 1, "L must be at least 1");
    let side = (2 * l) as usize;
    let idx = |s: Square| ((s.1 + l) as usize) * side + (s.0 + l) as usize;
    let sq = |n: usize| ((n % side) as i64 - l, (n / side) as i64 - l);
    const UNSEEN: usize = usize::MAX;
    let mut parent = vec![UNSEEN; side * side];
    let mut queue = VecDeque::new();
    for s in ORIGIN_SQUARES {
        if grid.count(s) >= k {
            parent[idx(s)] = idx(s);
            queue.push_back(idx(s));
        }
    }
    while let Some(n) = queue.pop_front() {
        let s = sq(n);
        if touches_box_boundary(s, l) {
            let mut squares = vec![s];
            let mut cur = n;
            while parent[cur] != cur {
                cur = parent[cur];
                squares.push(sq(cur));
            }
            squares.reverse();
            return Some(LatticePath { squares, k });
        }
        for di in -1..=1 {
            for dj in -1..=1 {
                let t = (s.0 + di, s.1 + dj);
                if (di, dj) != (0, 0) && in_box(t, l) && parent[idx(t)] == UNSEEN && grid.count(t) >= k {
                    parent[idx(t)] = n;
                    queue.push_back(idx(t));
                }
            }
        }
    }
    None
}
