use super::McEstimate;
use crate::boolean_graph::{build_clusters, count_annulus_crossing_clusters};
use crate::error::{Error, Result};
use crate::par;
use crate::sampler::{sample, SamplerSpec, Window};
use crate::seed::stream_seed;

/// Annulus radii `(L/4, 3L/4)` used by the uniqueness diagnostic.
pub fn annulus_for(l: f64) -> (f64, f64) {
    (0.25 * l, 0.75 * l)
}

/// For each scale `L`, the fraction of replicas on the window of half-width
/// `L` with at least two clusters crossing the annulus between `L/4` and
/// `3L/4`.
pub fn estimate_uniqueness_curve(spec: &SamplerSpec, r: f64, l_list: &[f64], n: u64) -> Result<Vec<(f64, McEstimate)>> {
    if !(r > 0.0) {
        return Err(Error::param("r > 0", format!("r = {r}")));
    }
    l_list
        .iter()
        .enumerate()
        .map(|(s, &l)| {
            let stream = stream_seed(spec.master_seed, "unique", s as u64);
            let sl = spec.with_window(Window::centered(l)?).with_seed(stream);
            let (r_in, r_out) = annulus_for(l);
            let hits = par::try_map_replicas(n, |i| {
                let c = sample(&sl, i)?;
                Ok::<_, Error>(count_annulus_crossing_clusters(&build_clusters(&c, r), r_in, r_out)? >= 2)
            })?;
            Ok((l, McEstimate::from_hits(&hits, spec.master_seed, stream)))
        })
        .collect()
}
