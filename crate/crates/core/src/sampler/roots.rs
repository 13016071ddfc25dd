//! Certified zero extraction for truncated GAFs.
//!
//! The region is tiled into square cells. On each cell the polynomial is
//! re-expanded around the cell centre `c` as
//! `g(t) = f_n(c + t) exp(-alpha t) / const`, where `alpha` is the local
//! exponential growth rate of `f_n` (`conj(c)` inside the bulk, `n / c`
//! beyond it). That keeps the Taylor coefficients of `g` within a few orders
//! of magnitude, so they can be read off an FFT of samples on a circle around
//! the cell and handed to a small Aberth solve. Candidate roots are polished
//! by Newton steps on the full series.
//!
//! Two gates certify the result: every returned root has `|f*| <
//! root_tolerance`, and the number of returned roots equals the winding
//! number of `f*` around the region boundary. On failure the tiling is
//! refined and the extraction repeated; persistent failure is an error.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::gaf::{GafPolynomial, FULL_PRECISION_CUTOFF};
use super::{Point, PointConfig, ProcessKind, SamplerSpec, SeedLineage, Window};
use crate::error::{Error, Result};
use crate::seed::replica_rng;

/// Weight cutoff for contour evaluations; only the argument is needed there.
const CONTOUR_CUTOFF: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct RootFinder {
    /// Upper bound on `|f*(root)|` for an accepted root.
    pub root_tolerance: f64,
    /// Initial boundary sampling density for the argument principle.
    pub nodes_per_unit: f64,
    /// Maximum number of density doublings on the boundary.
    pub max_doublings: usize,
    /// Target side of the tiling cells.
    pub cell_side: f64,
    /// FFT size used for each local expansion.
    pub taylor_nodes: usize,
    /// Extra attempts with a finer tiling after a failed reconciliation.
    pub max_refinements: usize,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            root_tolerance: 1e-8,
            nodes_per_unit: 64.0,
            max_doublings: 8,
            cell_side: 4.0,
            taylor_nodes: 128,
            max_refinements: 2,
        }
    }
}

/// Largest argument step accepted on one contour segment before it is split.
const MAX_ARG_STEP: f64 = std::f64::consts::FRAC_PI_4;
const MAX_SPLIT_DEPTH: usize = 48;

/// Change of `arg f` along the contour from `s0` to `s1`, splitting the
/// segment while the step exceeds `MAX_ARG_STEP`. A zero close to the
/// contour forces splits down to its distance from it.
fn arg_increment(
    eval: &dyn Fn(f64) -> Complex64,
    s0: f64,
    s1: f64,
    v0: Complex64,
    v1: Complex64,
    depth: usize,
) -> Result<f64> {
    let step = (v1 * v0.conj()).arg();
    if step.abs() <= MAX_ARG_STEP {
        return Ok(step);
    }
    if depth == MAX_SPLIT_DEPTH {
        return Err(Error::Reconciliation(format!(
            "argument still jumps by {step:.3} on a contour segment of length {:.1e}",
            s1 - s0
        )));
    }
    let sm = 0.5 * (s0 + s1);
    let vm = eval(sm);
    if vm.norm_sqr() == 0.0 || !vm.is_finite() {
        return Err(Error::Reconciliation(
            "f* vanishes or overflows on the region boundary".into(),
        ));
    }
    Ok(arg_increment(eval, s0, sm, v0, vm, depth + 1)? + arg_increment(eval, sm, s1, vm, v1, depth + 1)?)
}

impl RootFinder {
    /// Number of zeros of `f_n` inside `region`, by the argument principle on
    /// the boundary. The sampling density starts at `nodes_per_unit` and is
    /// doubled until the count agrees at three consecutive densities, and any
    /// segment with a large argument step is split locally.
    pub fn winding_count(&self, poly: &GafPolynomial, region: &Window) -> Result<usize> {
        let (x0, x1) = region.x_range();
        let (y0, y1) = region.y_range();
        let side = x1 - x0;
        let per_edge = ((side * self.nodes_per_unit).ceil() as usize).max(4);
        let corners = [
            Complex64::new(x0, y0),
            Complex64::new(x1, y0),
            Complex64::new(x1, y1),
            Complex64::new(x0, y1),
        ];
        // loop parameter s in [0, 4): edge floor(s), fraction s - floor(s)
        let at = |s: f64| -> Complex64 {
            let e = (s.floor() as usize).min(3);
            let f = s - e as f64;
            corners[e] + (corners[(e + 1) % 4] - corners[e]) * f
        };
        let eval = |s: f64| poly.eval_scaled(at(s), CONTOUR_CUTOFF).value;

        let mut segments = 4 * per_edge;
        let mut values: Vec<Complex64> = (0..segments).map(|i| eval(4.0 * i as f64 / segments as f64)).collect();
        let mut history: Vec<i64> = Vec::new();
        for level in 0..=self.max_doublings {
            if values.iter().any(|v| v.norm_sqr() == 0.0 || !v.is_finite()) {
                return Err(Error::Reconciliation(
                    "f* vanishes or overflows on the region boundary".into(),
                ));
            }
            let mut total = 0.0;
            for i in 0..segments {
                let (s0, s1) = (4.0 * i as f64 / segments as f64, 4.0 * (i + 1) as f64 / segments as f64);
                total += arg_increment(&eval, s0, s1, values[i], values[(i + 1) % segments], 0)?;
            }
            history.push((total / TAU).round() as i64);
            let h = history.len();
            if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
                let count = history[h - 1];
                if count < 0 {
                    return Err(Error::Reconciliation(format!("negative winding {count}")));
                }
                return Ok(count as usize);
            }
            if level == self.max_doublings {
                break;
            }
            let mut refined = Vec::with_capacity(2 * segments);
            for (i, v) in values.iter().enumerate() {
                refined.push(*v);
                refined.push(eval(4.0 * (2 * i + 1) as f64 / (2 * segments) as f64));
            }
            values = refined;
            segments *= 2;
        }
        Err(Error::Reconciliation(format!(
            "boundary winding did not stabilise: {history:?}"
        )))
    }

    /// All zeros of `f_n` inside the closed `region`, certified by the residual
    /// bound and the argument principle.
    pub fn find(&self, poly: &GafPolynomial, region: &Window) -> Result<Vec<Complex64>> {
        let expected = self.winding_count(poly, region)?;
        if poly.degree() == 0 {
            return Ok(Vec::new());
        }
        let mut side = self.cell_side;
        let mut failures = Vec::new();
        for attempt in 0..=self.max_refinements {
            match self.attempt(poly, region, side, expected) {
                Ok(roots) => return Ok(roots),
                Err(msg) => {
                    log::warn!("root extraction attempt {attempt} failed: {msg}; refining");
                    failures.push(msg);
                    side *= 0.7;
                }
            }
        }
        Err(Error::Reconciliation(failures.join(" | ")))
    }

    fn attempt(
        &self,
        poly: &GafPolynomial,
        region: &Window,
        cell_side: f64,
        expected: usize,
    ) -> std::result::Result<Vec<Complex64>, String> {
        let (x0, x1) = region.x_range();
        let (y0, _) = region.y_range();
        let cells = ((x1 - x0) / cell_side).ceil().max(1.0) as usize;
        let s = (x1 - x0) / cells as f64;
        let rho = 1.6 * s * FRAC_1_SQRT_2;
        let m = self.taylor_nodes;
        let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
        let mut local = LocalExpansion::new(m, rho, fft);
        let margin = 1e-6 * s;

        let mut found = Vec::new();
        for iy in 0..cells {
            for ix in 0..cells {
                let c = Complex64::new(x0 + (ix as f64 + 0.5) * s, y0 + (iy as f64 + 0.5) * s);
                for t in local.roots(poly, c, 0.5 * s * std::f64::consts::SQRT_2 / rho)? {
                    if t.re.abs() <= 0.5 * s + margin && t.im.abs() <= 0.5 * s + margin {
                        let z = polish(poly, c + t);
                        if (z - (c + t)).norm() < 0.1 * s {
                            found.push(z);
                        }
                    }
                }
            }
        }

        let roots: Vec<Complex64> = dedup(found, 1e-7)
            .into_iter()
            .filter(|z| region.contains(&Point::new(z.re, z.im)))
            .collect();
        if roots.len() != expected {
            return Err(format!(
                "{} roots found, argument principle gives {expected}",
                roots.len()
            ));
        }
        for z in &roots {
            let r = poly.evaluate_normalized(*z).norm();
            if !(r < self.root_tolerance) {
                return Err(format!("residual |f*({z})| = {r:e}"));
            }
        }
        Ok(roots)
    }
}

struct LocalExpansion {
    nodes: usize,
    rho: f64,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    log_re: Vec<f64>,
    arg: Vec<f64>,
}

impl LocalExpansion {
    fn new(nodes: usize, rho: f64, fft: Arc<dyn Fft<f64>>) -> Self {
        LocalExpansion {
            nodes,
            rho,
            fft,
            buf: vec![Complex64::new(0.0, 0.0); nodes],
            log_re: vec![0.0; nodes],
            arg: vec![0.0; nodes],
        }
    }

    /// Offsets `t` (from `c`) of the zeros of the local expansion lying in the
    /// disk `|t| < rho * inner`.
    fn roots(&mut self, poly: &GafPolynomial, c: Complex64, inner: f64) -> std::result::Result<Vec<Complex64>, String> {
        let m = self.nodes;
        let alpha = if c.norm_sqr() > 0.0 {
            poly.weight_mean(c) / c
        } else {
            Complex64::new(0.0, 0.0)
        };
        let c2 = c.norm_sqr();
        let mut top = f64::NEG_INFINITY;
        for j in 0..m {
            let t = Complex64::from_polar(self.rho, TAU * j as f64 / m as f64);
            let z = c + t;
            let sv = poly.eval_scaled(z, FULL_PRECISION_CUTOFF);
            let at = alpha * t;
            let mag = sv.value.norm();
            self.log_re[j] = if mag > 0.0 {
                mag.ln() + sv.log_scale + 0.5 * (z.norm_sqr() - c2) - at.re
            } else {
                f64::NEG_INFINITY
            };
            self.arg[j] = sv.value.arg() - at.im;
            top = top.max(self.log_re[j]);
        }
        if !top.is_finite() {
            return Err(format!("local expansion at {c} is degenerate"));
        }
        for j in 0..m {
            self.buf[j] = Complex64::from_polar((self.log_re[j] - top).exp(), self.arg[j]);
        }
        self.fft.process(&mut self.buf);
        let scale = 1.0 / m as f64;
        let coeffs: Vec<Complex64> = self.buf.iter().map(|b| b * scale).collect();
        let biggest = coeffs.iter().map(|b| b.norm()).fold(0.0, f64::max);
        // The top quarter of the spectrum is rounding noise once the local
        // function is resolved; keep only coefficients well above it.
        let noise = coeffs[3 * m / 4..].iter().map(|b| b.norm()).fold(0.0, f64::max);
        if noise > 1e-9 * biggest {
            return Err(format!("local expansion at {c} is under-resolved"));
        }
        let floor = (10.0 * noise).max(1e-14 * biggest);
        let degree = coeffs.iter().rposition(|b| b.norm() > floor).unwrap_or(0);
        if degree == 0 {
            return Ok(Vec::new());
        }
        let roots = aberth(&coeffs[..=degree]).ok_or_else(|| format!("Aberth did not converge at {c}"))?;
        Ok(roots
            .into_iter()
            .filter(|u| u.norm() < inner * 1.05)
            .map(|u| u * self.rho)
            .collect())
    }
}

fn polish(poly: &GafPolynomial, mut z: Complex64) -> Complex64 {
    for _ in 0..12 {
        let sv = poly.eval_scaled(z, FULL_PRECISION_CUTOFF);
        if sv.value.norm_sqr() == 0.0 {
            break;
        }
        let step = sv.newton_step();
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn dedup(mut roots: Vec<Complex64>, eps: f64) -> Vec<Complex64> {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = Vec::with_capacity(roots.len());
    for z in roots {
        let dup = out
            .iter()
            .rev()
            .take_while(|w| z.re - w.re <= eps)
            .any(|w| (z - w).norm() <= eps);
        if !dup {
            out.push(z);
        }
    }
    out
}

/// Newton ratio `p(z)/p'(z)` for `p(z) = sum_k coeffs[k] z^k`, using the
/// reversed polynomial outside the unit disk, together with a flag telling
/// whether `|p(z)|` is already at the rounding level of the evaluation.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let d = coeffs.len() - 1;
    let slack = 8.0 * f64::EPSILON * (d + 1) as f64;
    if z.norm_sqr() <= 1.0 {
        let r = z.norm();
        let mut p = coeffs[d];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[d].norm();
        for k in (0..d).rev() {
            dp = dp * z + p;
            p = p * z + coeffs[k];
            bound = bound * r + coeffs[k].norm();
        }
        (p / dp, p.norm() <= slack * bound)
    } else {
        let w = z.inv();
        let r = w.norm();
        let mut q = coeffs[0];
        let mut dq = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[0].norm();
        for &c in &coeffs[1..=d] {
            dq = dq * w + q;
            q = q * w + c;
            bound = bound * r + c.norm();
        }
        (z / (d as f64 - w * dq / q), q.norm() <= slack * bound)
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, ln|a_k|)`.
fn newton_polygon_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (k1, v1) = hull[hull.len() - 2];
            let (k2, v2) = hull[hull.len() - 1];
            // drop k2 if it lies on or below the chord k1 -> p
            let cross = (k2 - k1) as f64 * (p.1 - v1) - (v2 - v1) * (p.0 - k1) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    for (seg, w) in hull.windows(2).enumerate() {
        let (ka, va) = w[0];
        let (kb, vb) = w[1];
        let count = kb - ka;
        let radius = ((va - vb) / count as f64).exp();
        let offset = 0.7 + 1.3 * seg as f64;
        for j in 0..count {
            let theta = TAU * j as f64 / count as f64 + offset;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

/// All roots of `sum_k coeffs[k] z^k` by the Aberth–Ehrlich iteration.
/// Returns `None` if the iteration fails to converge.
pub(crate) fn aberth(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut lo = 0;
    while lo < coeffs.len() && coeffs[lo] == Complex64::new(0.0, 0.0) {
        lo += 1;
    }
    let mut hi = coeffs.len();
    while hi > lo && coeffs[hi - 1] == Complex64::new(0.0, 0.0) {
        hi -= 1;
    }
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    if hi <= lo + 1 {
        return Some(roots);
    }
    let p = &coeffs[lo..hi];
    let d = p.len() - 1;
    if d == 1 {
        roots.push(-p[0] / p[1]);
        return Some(roots);
    }
    let mut z = newton_polygon_guesses(p);
    let mut done = vec![false; d];
    let eps = 4.0 * f64::EPSILON;
    let mut converged = false;
    for _ in 0..500 {
        let mut all = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (ratio, settled) = newton_ratio(p, z[i]);
            if settled {
                done[i] = true;
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                // nudge off a degenerate point
                let kick = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += kick;
                all = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= eps * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    roots.extend(z);
    Some(roots)
}

/// Zeros of `poly` inside `region` with the default certification settings.
pub fn find_polynomial_roots(poly: &GafPolynomial, region: &Window) -> Result<Vec<Complex64>> {
    RootFinder::default().find(poly, region)
}

/// Bulk approximation of the GAF zero process: zeros of `f_n` in the window,
/// with `n = spec.model_order()`.
pub fn sample_gaf_zeros(spec: &SamplerSpec, replica: u64) -> Result<PointConfig> {
    spec.check_bulk()?;
    let n = spec.model_order();
    let mut rng = replica_rng(spec.master_seed, replica);
    let poly = GafPolynomial::sample(n, &mut rng);
    let roots = find_polynomial_roots(&poly, &spec.window).map_err(|e| match e {
        Error::Reconciliation(msg) => {
            Error::Reconciliation(format!("gaf replica {replica} (seed {}): {msg}", spec.master_seed))
        }
        other => other,
    })?;
    Ok(PointConfig {
        window: spec.window,
        points: roots.iter().map(|z| Point::new(z.re, z.im)).collect(),
        process: ProcessKind::Gaf,
        seed_lineage: Some(SeedLineage {
            master_seed: spec.master_seed,
            replica,
        }),
        model_order: Some(n),
    })
}
