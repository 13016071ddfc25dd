//! Empty circuits around the origin.
//!
//! A circuit is a closed walk of empty squares inside `B_{L theta}` in which
//! consecutive squares share a side (4-adjacency), and it surrounds the
//! origin when the polygon through the square centres winds around it. This
//! is the dual of 8-connected occupied paths: an empty circuit exists
//! exactly when no occupied 8-connected path joins an origin square to
//! `W_{L theta}`. (With 8-adjacent empty circuits the duality breaks, since an
//! occupied path can slip through a diagonal gap of such a circuit.)
//!
//! Detection runs on the double cover of the empty-square graph, tracking the
//! parity of crossings of the ray `{(x, 0) : x > 0}`. A closed walk with odd
//! parity has odd winding number, and splitting it into simple cycles leaves
//! one cycle with winding `+-1`; conversely every such cycle has odd parity.

use super::{in_box, OccupancyGrid, Square};
use crate::boolean_graph::UnionFind;

/// Whether a 4-connected circuit of empty squares in `B_{L theta}` surrounds
/// the origin.
pub fn exists_empty_circuit(grid: &OccupancyGrid, l: i64) -> bool {
    assert!(l >= 1, "L must be at least 1");
    let side = (2 * l) as usize;
    let idx = |s: Square| ((s.1 + l) as usize) * side + (s.0 + l) as usize;
    let cells = side * side;
    // node (square, parity) -> 2 * idx + parity
    let mut uf = UnionFind::new(2 * cells);
    let empty = |s: Square| in_box(s, l) && grid.count(s) == 0;
    for j in -l..l {
        for i in -l..l {
            let s = (i, j);
            if !empty(s) {
                continue;
            }
            let right = (i + 1, j);
            if empty(right) {
                uf.union(2 * idx(s), 2 * idx(right));
                uf.union(2 * idx(s) + 1, 2 * idx(right) + 1);
            }
            let up = (i, j + 1);
            if empty(up) {
                // the step (i, -1) -> (i, 0) crosses the ray when i >= 0
                let flip = usize::from(j == -1 && i >= 0);
                uf.union(2 * idx(s), 2 * idx(up) + flip);
                uf.union(2 * idx(s) + 1, 2 * idx(up) + (1 - flip));
            }
        }
    }
    (0..cells).any(|n| uf.find(2 * n) == uf.find(2 * n + 1))
}
