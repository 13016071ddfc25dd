use serde::Serialize;

use super::McEstimate;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayPoint {
    pub scale: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Zero-hit scale, excluded from the fit.
    pub censored: bool,
}

/// Least-squares fit of `ln p` against scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub points: Vec<DecayPoint>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl DecayFit {
    pub fn censored_scales(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.censored).map(|p| p.scale).collect()
    }
}

/// Fits `ln p = intercept + slope * scale` over the entries with `p > 0`.
pub fn fit_log_linear(points: Vec<DecayPoint>) -> Result<DecayFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| !p.censored)
        .map(|p| (p.scale, p.p_hat.ln()))
        .collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} uncensored scales, need at least 3",
            used.len()
        )));
    }
    let m = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / m;
    let my = used.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all uncensored scales coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = used.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(DecayFit {
        points,
        slope,
        intercept,
        r_squared,
    })
}

/// Log-linear decay fit over `(scale, estimate)` pairs; zero-hit scales are
/// censored and reported.
pub fn fit_exponential_decay(pairs: &[(f64, McEstimate)]) -> Result<DecayFit> {
    fit_log_linear(
        pairs
            .iter()
            .map(|(scale, e)| DecayPoint {
                scale: *scale,
                p_hat: e.p_hat,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
                censored: e.n_hits == 0,
            })
            .collect(),
    )
}

/// Raw `(scale, p)` pairs; entries with `p == 0` are censored.
pub fn decay_points(pairs: &[(f64, f64)]) -> Vec<DecayPoint> {
    pairs
        .iter()
        .map(|&(scale, p)| DecayPoint {
            scale,
            p_hat: p,
            ci_low: p,
            ci_high: p,
            censored: p <= 0.0,
        })
        .collect()
}
