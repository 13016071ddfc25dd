use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Monte Carlo probability estimate with a 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
    pub n_hits: u64,
    /// `3 / n_samples` when no replica hit, else absent.
    pub rule_of_three: Option<f64>,
    /// Master seed of the experiment.
    pub master_seed: u64,
    /// Seed of the replica stream the estimate was drawn from.
    pub stream_seed: u64,
}

/// Wilson score interval for `hits` successes out of `n`.
pub fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // clamp guards the last ulp so that ci_low <= p_hat <= ci_high exactly
    let lo = if hits == 0 { 0.0 } else { (centre - half).clamp(0.0, p) };
    let hi = if hits == n { 1.0 } else { (centre + half).clamp(p, 1.0) };
    (lo, hi)
}

impl McEstimate {
    pub fn from_counts(n_hits: u64, n_samples: u64, master_seed: u64, stream_seed: u64) -> Self {
        assert!(n_hits <= n_samples, "more hits than samples");
        let (ci_low, ci_high) = wilson_interval(n_hits, n_samples);
        McEstimate {
            p_hat: if n_samples == 0 {
                0.0
            } else {
                n_hits as f64 / n_samples as f64
            },
            ci_low,
            ci_high,
            n_samples,
            n_hits,
            rule_of_three: (n_hits == 0 && n_samples > 0).then(|| 3.0 / n_samples as f64),
            master_seed,
            stream_seed,
        }
    }

    pub fn from_hits(hits: &[bool], master_seed: u64, stream_seed: u64) -> Self {
        let n_hits = hits.iter().filter(|&&h| h).count() as u64;
        Self::from_counts(n_hits, hits.len() as u64, master_seed, stream_seed)
    }

    /// The whole interval lies strictly below `other`'s.
    pub fn separated_below(&self, other: &McEstimate) -> bool {
        self.ci_high < other.ci_low
    }

    pub fn is_zero_hit(&self) -> bool {
        self.n_hits == 0
    }
}
