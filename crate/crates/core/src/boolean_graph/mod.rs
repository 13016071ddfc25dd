//! The Boolean disk graph: points are joined when their radius-`r` disks
//! overlap, i.e. at Euclidean distance strictly below `2r`.

mod union_find;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{Point, PointConfig, Window};
pub use union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Left edge to right edge.
    Horizontal,
    /// Bottom edge to top edge.
    Vertical,
}

/// Bounding data of one cluster.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClusterInfo {
    pub size: usize,
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
    pub min_linf: f64,
    pub max_linf: f64,
    pub min_l2: f64,
}

impl ClusterInfo {
    fn seed(p: &Point) -> Self {
        ClusterInfo {
            size: 1,
            min_x: p.x,
            max_x: p.x,
            min_y: p.y,
            max_y: p.y,
            min_linf: p.norm_inf(),
            max_linf: p.norm_inf(),
            min_l2: p.norm(),
        }
    }

    fn absorb(&mut self, p: &Point) {
        self.size += 1;
        self.min_x = self.min_x.min(p.x);
        self.max_x = self.max_x.max(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_y = self.max_y.max(p.y);
        self.min_linf = self.min_linf.min(p.norm_inf());
        self.max_linf = self.max_linf.max(p.norm_inf());
        self.min_l2 = self.min_l2.min(p.norm());
    }
}

/// Clusters of the disk graph at a fixed radius.
///
/// Cluster ids are canonical: they are numbered `0, 1, ...` in order of the
/// lowest point index they contain, so two labelings describe the same
/// partition exactly when their id vectors are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterLabeling {
    radius: f64,
    window: Window,
    ids: Vec<usize>,
    clusters: Vec<ClusterInfo>,
}

impl ClusterLabeling {
    /// Canonical labeling from arbitrary per-point representatives.
    pub fn from_representatives(config: &PointConfig, radius: f64, reps: &[usize]) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut ids = Vec::with_capacity(reps.len());
        let mut clusters: Vec<ClusterInfo> = Vec::new();
        for (p, &rep) in config.points.iter().zip(reps) {
            let next = remap.len();
            let id = *remap.entry(rep).or_insert(next);
            if id == clusters.len() {
                clusters.push(ClusterInfo::seed(p));
            } else {
                clusters[id].absorb(p);
            }
            ids.push(id);
        }
        ClusterLabeling {
            radius,
            window: config.window,
            ids,
            clusters,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn n_points(&self) -> usize {
        self.ids.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn cluster_of(&self, point: usize) -> usize {
        self.ids[point]
    }

    pub fn clusters(&self) -> &[ClusterInfo] {
        &self.clusters
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.size).collect()
    }

    pub fn largest_cluster_size(&self) -> usize {
        self.clusters.iter().map(|c| c.size).max().unwrap_or(0)
    }

    /// Member lists, indexed by cluster id.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.clusters.len()];
        for (i, &id) in self.ids.iter().enumerate() {
            out[id].push(i);
        }
        out
    }
}

/// Clusters of the disk graph of `config` at radius `r`, using a spatial hash
/// with cell side `2r` so that each point is compared only with its 3x3 cell
/// neighbourhood.
pub fn build_clusters(config: &PointConfig, r: f64) -> ClusterLabeling {
    assert!(r > 0.0 && r.is_finite(), "radius must be positive, got {r}");
    let pts = &config.points;
    let n = pts.len();
    let mut uf = UnionFind::new(n);
    if n > 1 {
        let cell = 2.0 * r;
        let reach = 4.0 * r * r;
        let (x0, y0) = pts
            .iter()
            .fold((f64::INFINITY, f64::INFINITY), |(a, b), p| (a.min(p.x), b.min(p.y)));
        let key =
            |p: &Point| -> (i64, i64) { (((p.x - x0) / cell).floor() as i64, ((p.y - y0) / cell).floor() as i64) };
        let keys: Vec<(i64, i64)> = pts.iter().map(key).collect();
        let nx = keys.iter().map(|k| k.0).max().unwrap_or(0) + 1;
        let ny = keys.iter().map(|k| k.1).max().unwrap_or(0) + 1;
        let grid = CellIndex::new(&keys, nx, ny);
        for i in 0..n {
            let (cx, cy) = keys[i];
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for &j in grid.cell(cx + dx, cy + dy) {
                        let j = j as usize;
                        if j > i && pts[i].dist2(&pts[j]) < reach {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
    }
    let reps: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    ClusterLabeling::from_representatives(config, r, &reps)
}

/// Points bucketed by cell: a dense CSR table when the occupied grid is small,
/// a hash of sorted runs otherwise.
enum CellIndex {
    Dense {
        nx: i64,
        ny: i64,
        start: Vec<u32>,
        items: Vec<u32>,
    },
    Sparse {
        runs: HashMap<(i64, i64), (u32, u32)>,
        items: Vec<u32>,
    },
}

impl CellIndex {
    fn new(keys: &[(i64, i64)], nx: i64, ny: i64) -> Self {
        let n = keys.len();
        let cells = nx.saturating_mul(ny);
        if cells <= 4 * n as i64 + 64 {
            let cells = cells as usize;
            let mut start = vec![0u32; cells + 1];
            for &(x, y) in keys {
                start[(y * nx + x) as usize + 1] += 1;
            }
            for c in 0..cells {
                start[c + 1] += start[c];
            }
            let mut fill = start.clone();
            let mut items = vec![0u32; n];
            for (i, &(x, y)) in keys.iter().enumerate() {
                let c = (y * nx + x) as usize;
                items[fill[c] as usize] = i as u32;
                fill[c] += 1;
            }
            CellIndex::Dense { nx, ny, start, items }
        } else {
            let mut items: Vec<u32> = (0..n as u32).collect();
            items.sort_by_key(|&i| keys[i as usize]);
            let mut runs = HashMap::new();
            let mut s = 0;
            while s < n {
                let k = keys[items[s] as usize];
                let mut e = s + 1;
                while e < n && keys[items[e] as usize] == k {
                    e += 1;
                }
                runs.insert(k, (s as u32, e as u32));
                s = e;
            }
            CellIndex::Sparse { runs, items }
        }
    }

    fn cell(&self, x: i64, y: i64) -> &[u32] {
        match self {
            CellIndex::Dense { nx, ny, start, items } => {
                if x < 0 || y < 0 || x >= *nx || y >= *ny {
                    return &[];
                }
                let c = (y * nx + x) as usize;
                &items[start[c] as usize..start[c + 1] as usize]
            }
            CellIndex::Sparse { runs, items } => match runs.get(&(x, y)) {
                Some(&(s, e)) => &items[s as usize..e as usize],
                None => &[],
            },
        }
    }
}

/// Euclidean distance from `p` to the boundary `W_R = {z : |z|_inf = R}`.
pub fn dist_to_box_boundary(p: &Point, big_r: f64) -> f64 {
    let m = p.norm_inf();
    if m <= big_r {
        big_r - m
    } else {
        let dx = (p.x.abs() - big_r).max(0.0);
        let dy = (p.y.abs() - big_r).max(0.0);
        dx.hypot(dy)
    }
}

fn check_box(window: &Window, big_r: f64) -> Result<()> {
    if !(big_r > 0.0) || big_r > window.half_width {
        return Err(Error::param(
            "0 < R <= half_width",
            format!("R = {big_r}, half_width = {}", window.half_width),
        ));
    }
    Ok(())
}

/// Cluster witnessing that the origin is joined to `W_R`: it holds a point
/// within `r` of the origin and a point whose disk meets `W_R`.
pub fn origin_box_witness(labeling: &ClusterLabeling, config: &PointConfig, big_r: f64) -> Result<Option<usize>> {
    check_box(&config.window, big_r)?;
    let r = labeling.radius;
    let mut touches = vec![false; labeling.n_clusters()];
    for (p, &id) in config.points.iter().zip(&labeling.ids) {
        if dist_to_box_boundary(p, big_r) < r {
            touches[id] = true;
        }
    }
    Ok(labeling
        .clusters
        .iter()
        .enumerate()
        .find(|(id, c)| c.min_l2 < r && touches[*id])
        .map(|(id, _)| id))
}

pub fn origin_connected_to_box(labeling: &ClusterLabeling, config: &PointConfig, big_r: f64) -> Result<bool> {
    origin_box_witness(labeling, config, big_r).map(|w| w.is_some())
}

/// Ids of clusters with a point of sup-norm `<= r_in` and one of sup-norm
/// `>= r_out`.
pub fn annulus_crossing_clusters(labeling: &ClusterLabeling, r_in: f64, r_out: f64) -> Result<Vec<usize>> {
    if !(r_in > 0.0 && r_in < r_out && r_out <= labeling.window.half_width) {
        return Err(Error::param(
            "0 < R_in < R_out <= half_width",
            format!(
                "R_in = {r_in}, R_out = {r_out}, half_width = {}",
                labeling.window.half_width
            ),
        ));
    }
    Ok(labeling
        .clusters
        .iter()
        .enumerate()
        .filter(|(_, c)| c.min_linf <= r_in && c.max_linf >= r_out)
        .map(|(id, _)| id)
        .collect())
}

pub fn count_annulus_crossing_clusters(labeling: &ClusterLabeling, r_in: f64, r_out: f64) -> Result<usize> {
    annulus_crossing_clusters(labeling, r_in, r_out).map(|v| v.len())
}

/// Cluster with a point within `r` of both the low and the high window edge
/// along `axis`.
pub fn edge_crossing_witness(labeling: &ClusterLabeling, axis: Axis) -> Option<usize> {
    let r = labeling.radius;
    let (lo, hi) = match axis {
        Axis::Horizontal => labeling.window.x_range(),
        Axis::Vertical => labeling.window.y_range(),
    };
    labeling.clusters.iter().position(|c| {
        let (a, b) = match axis {
            Axis::Horizontal => (c.min_x, c.max_x),
            Axis::Vertical => (c.min_y, c.max_y),
        };
        a - lo < r && hi - b < r
    })
}

pub fn edge_to_edge_crossing(labeling: &ClusterLabeling, config: &PointConfig, axis: Axis) -> bool {
    debug_assert_eq!(config.len(), labeling.n_points());
    edge_crossing_witness(labeling, axis).is_some()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OriginBoxFlag {
    pub big_r: f64,
    pub connected: bool,
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnulusFlag {
    pub r_in: f64,
    pub r_out: f64,
    pub count: usize,
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeFlag {
    pub axis: Axis,
    pub crossing: bool,
    pub witness: Option<usize>,
}

/// Cluster report: summary sizes plus the requested crossing events.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingReport {
    pub radius: f64,
    pub n_points: usize,
    pub n_clusters: usize,
    pub largest_cluster_size: usize,
    pub origin_to_box: Vec<OriginBoxFlag>,
    pub annulus_crossing: Vec<AnnulusFlag>,
    pub edge_to_edge: Vec<EdgeFlag>,
}

impl CrossingReport {
    pub fn new(labeling: &ClusterLabeling, config: &PointConfig, boxes: &[f64], annuli: &[(f64, f64)]) -> Result<Self> {
        let origin_to_box = boxes
            .iter()
            .map(|&big_r| {
                let witness = origin_box_witness(labeling, config, big_r)?;
                Ok(OriginBoxFlag {
                    big_r,
                    connected: witness.is_some(),
                    witness,
                })
            })
            .collect::<Result<_>>()?;
        let annulus_crossing = annuli
            .iter()
            .map(|&(r_in, r_out)| {
                let witnesses = annulus_crossing_clusters(labeling, r_in, r_out)?;
                Ok(AnnulusFlag {
                    r_in,
                    r_out,
                    count: witnesses.len(),
                    witnesses,
                })
            })
            .collect::<Result<_>>()?;
        let edge_to_edge = [Axis::Horizontal, Axis::Vertical]
            .into_iter()
            .map(|axis| {
                let witness = edge_crossing_witness(labeling, axis);
                EdgeFlag {
                    axis,
                    crossing: witness.is_some(),
                    witness,
                }
            })
            .collect();
        Ok(CrossingReport {
            radius: labeling.radius,
            n_points: labeling.n_points(),
            n_clusters: labeling.n_clusters(),
            largest_cluster_size: labeling.largest_cluster_size(),
            origin_to_box,
            annulus_crossing,
            edge_to_edge,
        })
    }
}
