//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.
#![allow(dead_code)]

use contperc::sampler::{Point, PointConfig, Window};

/// Relabels so that clusters are numbered in order of first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Components of the graph joining points at distance `< 2r`, found by
/// depth-first search over all pairs.
pub fn brute_force_labels(points: &[Point], r: f64) -> Vec<usize> {
    let n = points.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(a) = stack.pop() {
            for b in 0..n {
                let dx = points[a].x - points[b].x;
                let dy = points[a].y - points[b].y;
                if label[b] == usize::MAX && (dx * dx + dy * dy).sqrt() < 2.0 * r {
                    label[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    label
}

/// Every simple path in the disk graph from a disk covering the origin to a
/// disk meeting the boundary of `[-R, R]^2`, enumerated by backtracking.
/// Exponential; only for a dozen points or so.
pub fn brute_force_origin_to_box(points: &[Point], r: f64, big_r: f64) -> bool {
    let n = points.len();
    let adj = |a: usize, b: usize| {
        let dx = points[a].x - points[b].x;
        let dy = points[a].y - points[b].y;
        (dx * dx + dy * dy).sqrt() < 2.0 * r
    };
    let covers_origin = |a: usize| (points[a].x.powi(2) + points[a].y.powi(2)).sqrt() < r;
    let meets_boundary = |a: usize| {
        let p = points[a];
        // nearest point on each side of the square, by clamped projection
        let c = |t: f64| t.clamp(-big_r, big_r);
        [(c(p.x), big_r), (c(p.x), -big_r), (big_r, c(p.y)), (-big_r, c(p.y))]
            .iter()
            .map(|&(x, y)| (p.x - x).hypot(p.y - y))
            .fold(f64::INFINITY, f64::min)
            < r
    };
    fn walk(
        a: usize,
        n: usize,
        used: &mut Vec<bool>,
        adj: &dyn Fn(usize, usize) -> bool,
        goal: &dyn Fn(usize) -> bool,
    ) -> bool {
        if goal(a) {
            return true;
        }
        for b in 0..n {
            if !used[b] && adj(a, b) {
                used[b] = true;
                if walk(b, n, used, adj, goal) {
                    return true;
                }
                used[b] = false;
            }
        }
        false
    }
    (0..n).filter(|&a| covers_origin(a)).any(|a| {
        let mut used = vec![false; n];
        used[a] = true;
        walk(a, n, &mut used, &adj, &meets_boundary)
    })
}

/// Reachability by recursive flood fill over 8-neighbour squares of the box
/// `[-L, L-1]^2` holding at least `k` points.
pub fn flood_fill_path(count: &dyn Fn(i64, i64) -> u32, k: u32, l: i64) -> bool {
    let side = (2 * l) as usize;
    let mut seen = vec![false; side * side];
    fn go(i: i64, j: i64, l: i64, k: u32, count: &dyn Fn(i64, i64) -> u32, seen: &mut Vec<bool>) -> bool {
        if i < -l || i >= l || j < -l || j >= l || count(i, j) < k {
            return false;
        }
        let at = ((j + l) * 2 * l + (i + l)) as usize;
        if seen[at] {
            return false;
        }
        seen[at] = true;
        if i == -l || j == -l || i == l - 1 || j == l - 1 {
            return true;
        }
        for di in -1..=1 {
            for dj in -1..=1 {
                if (di != 0 || dj != 0) && go(i + di, j + dj, l, k, count, seen) {
                    return true;
                }
            }
        }
        false
    }
    [(-1, -1), (-1, 0), (0, -1), (0, 0)]
        .iter()
        .any(|&(i, j)| go(i, j, l, k, count, &mut seen))
}

/// Enumerates simple cycles of 4-neighbour empty squares inside the box and
/// reports whether one winds around the point `(0, 0)`. Winding is measured
/// by summing turning angles of the polygon through square centres.
pub fn enumerate_empty_circuit(empty: &dyn Fn(i64, i64) -> bool, l: i64) -> bool {
    let side = 2 * l;
    let cells: Vec<(i64, i64)> = (-l..l)
        .flat_map(|j| (-l..l).map(move |i| (i, j)))
        .filter(|&(i, j)| empty(i, j))
        .collect();
    let index = |c: (i64, i64)| ((c.1 + l) * side + (c.0 + l)) as usize;
    let mut is_empty = vec![false; (side * side) as usize];
    for &c in &cells {
        is_empty[index(c)] = true;
    }
    let winds = |cycle: &[(i64, i64)]| {
        let mut total = 0.0;
        for w in 0..cycle.len() {
            let a = cycle[w];
            let b = cycle[(w + 1) % cycle.len()];
            let (ax, ay) = (a.0 as f64 + 0.5, a.1 as f64 + 0.5);
            let (bx, by) = (b.0 as f64 + 0.5, b.1 as f64 + 0.5);
            total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
        }
        (total / std::f64::consts::TAU).round() as i64 != 0
    };
    type Winds<'a> = &'a dyn Fn(&[(i64, i64)]) -> bool;
    struct Search<'a> {
        start: (i64, i64),
        l: i64,
        is_empty: &'a [bool],
        index: &'a dyn Fn((i64, i64)) -> usize,
        winds: Winds<'a>,
        on_path: Vec<bool>,
        path: Vec<(i64, i64)>,
    }
    impl Search<'_> {
        fn ok(&self, c: (i64, i64)) -> bool {
            c.0 >= -self.l && c.0 < self.l && c.1 >= -self.l && c.1 < self.l && self.is_empty[(self.index)(c)]
        }
        fn extend(&mut self) -> bool {
            let last = *self.path.last().unwrap();
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let c = (last.0 + di, last.1 + dj);
                if !self.ok(c) {
                    continue;
                }
                if c == self.start && self.path.len() >= 4 && (self.winds)(&self.path) {
                    return true;
                }
                // only cycles whose smallest cell (in index order) is the start
                if self.on_path[(self.index)(c)] || (self.index)(c) < (self.index)(self.start) {
                    continue;
                }
                self.on_path[(self.index)(c)] = true;
                self.path.push(c);
                if self.extend() {
                    return true;
                }
                self.path.pop();
                self.on_path[(self.index)(c)] = false;
            }
            false
        }
    }
    cells.iter().any(|&start| {
        let mut s = Search {
            start,
            l,
            is_empty: &is_empty,
            index: &index,
            winds: &winds,
            on_path: vec![false; (side * side) as usize],
            path: vec![start],
        };
        s.on_path[index(start)] = true;
        s.extend()
    })
}

/// Void probability of a homogeneous Poisson process on a region of area `a`.
pub fn poisson_void(intensity: f64, area: f64) -> f64 {
    (-intensity * area).exp()
}

/// Kolmogorov limiting survival function.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS p-value against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sq = n.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Two-sample KS p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = (n * m / (n + m)).sqrt();
    kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)
}

/// Wilson score interval at 95%, from the textbook formula.
pub fn wilson(hits: u64, n: u64) -> (f64, f64) {
    let z = 1.959963984540054;
    let (h, n) = (hits as f64, n as f64);
    let p = h / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Uniform points in the centred window, from a small LCG so that test
/// fixtures do not depend on the crate's RNG plumbing.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform_config(&mut self, half_width: f64, n: usize) -> PointConfig {
        let w = Window::centered(half_width).unwrap();
        let pts = (0..n)
            .map(|_| {
                Point::new(
                    (2.0 * self.next_f64() - 1.0) * half_width,
                    (2.0 * self.next_f64() - 1.0) * half_width,
                )
            })
            .collect();
        PointConfig::external(w, pts).unwrap()
    }
}
