//! Truncated planar Gaussian analytic function
//! `f_n(z) = sum_k xi_k z^k / sqrt(k!)` and its normalized form
//! `f*(z) = exp(-|z|^2/2) f_n(z)`.
//!
//! Evaluation never forms `z^k / sqrt(k!)`. Writing `lambda = |z|^2`, each
//! normalized term is `xi_k * sqrt(p_k(lambda)) * (z/|z|)^k` where `p_k` is the
//! Poisson(lambda) mass function truncated to `k <= n`. The sum is accumulated
//! outward from the mode of `p_k` with the ratio recurrence
//! `v_{k+1} = v_k z / sqrt(k+1)` until the weights drop below a cutoff, and
//! the mode weight is factored out as a log scale. Nothing overflows, and the
//! only underflow possible is in the final `exp(log_scale)` when the true
//! value is below the f64 range.

use num_complex::Complex64;
use rand::Rng;

use super::standard_complex_gaussian;
use crate::error::{Error, Result};

/// Relative weight below which terms are dropped for full-precision work.
pub(crate) const FULL_PRECISION_CUTOFF: f64 = 1e-17;

#[derive(Clone, Debug, PartialEq)]
pub struct GafPolynomial {
    coeffs: Vec<Complex64>,
    sqrt_k: Vec<f64>,
    ln_factorial: Vec<f64>,
}

/// `value * exp(log_scale)` is `f*(z)`; `derivative * exp(log_scale)` is
/// `exp(-|z|^2/2) f_n'(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    pub value: Complex64,
    pub derivative: Complex64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn normalized(&self) -> Complex64 {
        self.value * self.log_scale.exp()
    }

    /// `ln |f*(z)|`, finite unless the value is exactly zero.
    pub fn ln_abs(&self) -> f64 {
        self.value.norm().ln() + self.log_scale
    }

    /// Newton step `f/f'`, independent of the scale.
    pub fn newton_step(&self) -> Complex64 {
        self.value / self.derivative
    }
}

impl GafPolynomial {
    /// Wraps coefficients `xi_0..=xi_n`. The leading coefficient must be nonzero.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::param("degree >= 0", "empty coefficient list")),
            Some(c) if *c == Complex64::new(0.0, 0.0) && coeffs.len() > 1 => {
                Err(Error::param("leading coefficient != 0", "xi_n is zero"))
            }
            Some(_) if coeffs.iter().any(|c| !c.is_finite()) => {
                Err(Error::param("finite coefficients", "non-finite xi_k"))
            }
            Some(_) => Ok(Self::build(coeffs)),
        }
    }

    fn build(coeffs: Vec<Complex64>) -> Self {
        let n = coeffs.len();
        let sqrt_k = (0..=n).map(|k| (k as f64).sqrt()).collect();
        let mut ln_factorial = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        ln_factorial.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            ln_factorial.push(acc);
        }
        GafPolynomial {
            coeffs,
            sqrt_k,
            ln_factorial,
        }
    }

    /// Draws `xi_0..=xi_n` i.i.d. standard complex Gaussian. A zero leading
    /// coefficient (a null event) is redrawn.
    pub fn sample<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| standard_complex_gaussian(rng)).collect();
        while coeffs[degree] == Complex64::new(0.0, 0.0) {
            log::warn!("degenerate GAF draw with xi_n = 0; redrawing leading coefficient");
            coeffs[degree] = standard_complex_gaussian(rng);
        }
        Self::build(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `ln(k!)` for `k <= degree + 1`.
    pub fn ln_factorial(&self, k: usize) -> f64 {
        self.ln_factorial[k]
    }

    /// Power-basis coefficient `xi_k / sqrt(k!)`. Underflows for very large k.
    pub fn monomial_coefficient(&self, k: usize) -> Complex64 {
        self.coeffs[k] * (-0.5 * self.ln_factorial[k]).exp()
    }

    /// Index of the largest truncated Poisson weight and its log.
    fn mode(&self, lambda: f64) -> (usize, f64) {
        let n = self.degree();
        let m = if lambda >= n as f64 { n } else { lambda.floor() as usize };
        let log_w = if m == 0 {
            -0.5 * lambda
        } else {
            0.5 * (-lambda + m as f64 * lambda.ln() - self.ln_factorial[m])
        };
        (m, log_w)
    }

    /// Scaled evaluation of `f*` and its normalized derivative. Terms whose
    /// weight relative to the mode falls below `cutoff` are skipped.
    pub fn eval_scaled(&self, z: Complex64, cutoff: f64) -> ScaledValue {
        let n = self.degree();
        let lambda = z.norm_sqr();
        let (m, log_scale) = self.mode(lambda);
        let xi = &self.coeffs;
        let sq = &self.sqrt_k;
        let cutoff2 = cutoff * cutoff;

        let phase = if m == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, m as f64 * z.im.atan2(z.re))
        };

        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);

        // upward from the mode
        let mut v = phase;
        let mut k = m;
        loop {
            value += xi[k] * v;
            if k < n {
                deriv += xi[k + 1] * (v * sq[k + 1]);
            }
            if k == n {
                break;
            }
            v = v * z * (1.0 / sq[k + 1]);
            k += 1;
            if v.norm_sqr() < cutoff2 {
                break;
            }
        }

        // downward from the mode
        if m > 0 && lambda > 0.0 {
            let step = z.conj() * (1.0 / lambda);
            let mut v = phase;
            let mut k = m;
            while k > 0 {
                v = v * step * sq[k];
                k -= 1;
                if v.norm_sqr() < cutoff2 {
                    break;
                }
                value += xi[k] * v;
                deriv += xi[k + 1] * (v * sq[k + 1]);
            }
        }

        ScaledValue {
            value,
            derivative: deriv,
            log_scale,
        }
    }

    /// `f*(z)` to full double precision (may underflow to zero far outside the
    /// bulk, where the true value is below the f64 range).
    pub fn evaluate_normalized(&self, z: Complex64) -> Complex64 {
        self.eval_scaled(z, FULL_PRECISION_CUTOFF).normalized()
    }

    /// Mean of the truncated Poisson weights `k -> p_k(|z|^2)`, `k <= n`.
    /// Used as the local exponential growth rate `mean / z` of `f_n`.
    pub(crate) fn weight_mean(&self, z: Complex64) -> f64 {
        let n = self.degree();
        let lambda = z.norm_sqr();
        let (m, _) = self.mode(lambda);
        let r = lambda.sqrt();
        let mut s0 = 1.0;
        let mut s1 = m as f64;
        let mut w = 1.0;
        for k in m..n {
            w *= r / self.sqrt_k[k + 1];
            let w2 = w * w;
            if w2 < 1e-34 {
                break;
            }
            s0 += w2;
            s1 += (k + 1) as f64 * w2;
        }
        if r > 0.0 {
            let mut w = 1.0;
            for k in (1..=m).rev() {
                w *= self.sqrt_k[k] / r;
                let w2 = w * w;
                if w2 < 1e-34 {
                    break;
                }
                s0 += w2;
                s1 += (k - 1) as f64 * w2;
            }
        }
        s1 / s0
    }

    /// Fujiwara bound on the moduli of all roots, computed in log space.
    pub fn root_bound(&self) -> f64 {
        let n = self.degree();
        if n == 0 {
            return 0.0;
        }
        let ln_a = |k: usize| self.coeffs[k].norm().ln() - 0.5 * self.ln_factorial[k];
        let ln_lead = ln_a(n);
        let mut best = f64::NEG_INFINITY;
        for j in 1..=n {
            let k = n - j;
            if self.coeffs[k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut ln_ratio = ln_a(k) - ln_lead;
            if k == 0 {
                ln_ratio -= std::f64::consts::LN_2;
            }
            best = best.max(ln_ratio / j as f64);
        }
        if best == f64::NEG_INFINITY {
            0.0
        } else {
            2.0 * best.exp()
        }
    }
}

/// `f*(z) = exp(-|z|^2/2) f_n(z)` for the polynomial `poly`.
pub fn evaluate_normalized_gaf(poly: &GafPolynomial, z: Complex64) -> Complex64 {
    poly.evaluate_normalized(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::replica_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct power-basis Horner evaluation times exp(-|z|^2/2); valid while
    /// nothing overflows (moderate n and |z|).
    fn horner_normalized(p: &GafPolynomial, z: Complex64) -> (Complex64, Complex64) {
        let n = p.degree();
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            d = d * z + v;
            v = v * z + p.monomial_coefficient(k);
        }
        let s = (-0.5 * z.norm_sqr()).exp();
        (v * s, d * s)
    }

    #[test]
    fn value_at_origin_is_xi0() {
        let mut rng = replica_rng(1, 1);
        let p = GafPolynomial::sample(25, &mut rng);
        assert_eq!(evaluate_normalized_gaf(&p, c(0.0, 0.0)), p.coefficients()[0]);
    }

    #[test]
    fn matches_horner_in_and_beyond_the_bulk() {
        let mut rng = replica_rng(2, 0);
        let p = GafPolynomial::sample(50, &mut rng);
        // |z|^2 up to 4n = 200
        for &z in &[
            c(0.3, -0.2),
            c(2.0, 1.0),
            c(-4.0, 5.0),
            c(7.0, 0.5),
            c(10.0, -10.0),
            c(0.0, 14.1),
        ] {
            let (h, hd) = horner_normalized(&p, z);
            let sv = p.eval_scaled(z, FULL_PRECISION_CUTOFF);
            let got = sv.normalized();
            let gotd = sv.derivative * sv.log_scale.exp();
            assert!((got - h).norm() <= 1e-10 * h.norm(), "z={z} {got} vs {h}");
            assert!(
                (gotd - hd).norm() <= 1e-10 * hd.norm().max(1e-300),
                "z={z} {gotd} vs {hd}"
            );
        }
    }

    #[test]
    fn far_outside_the_bulk_the_scale_is_finite() {
        let mut rng = replica_rng(3, 0);
        let p = GafPolynomial::sample(3000, &mut rng);
        let z = c(110.0, 0.0); // |z|^2 ~ 4n
        let sv = p.eval_scaled(z, FULL_PRECISION_CUTOFF);
        assert!(sv.value.is_finite() && sv.value.norm() > 0.0);
        assert!(sv.log_scale.is_finite() && sv.log_scale < -1000.0);
    }

    #[test]
    fn evaluation_is_pure() {
        let mut rng = replica_rng(4, 0);
        let p = GafPolynomial::sample(80, &mut rng);
        let z = c(3.3, -2.1);
        assert_eq!(p.evaluate_normalized(z), p.evaluate_normalized(z));
    }

    #[test]
    fn zero_leading_coefficient_is_rejected() {
        assert!(GafPolynomial::from_coefficients(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(GafPolynomial::from_coefficients(vec![]).is_err());
        assert!(GafPolynomial::from_coefficients(vec![c(1.0, 0.0)]).is_ok());
    }

    #[test]
    fn weight_mean_tracks_lambda_in_bulk_and_n_outside() {
        let mut rng = replica_rng(5, 0);
        let p = GafPolynomial::sample(400, &mut rng);
        let m = p.weight_mean(c(10.0, 0.0));
        assert!((m - 100.0).abs() < 1.0, "{m}");
        let m = p.weight_mean(c(40.0, 0.0));
        assert!((m - 400.0).abs() < 2.0, "{m}");
        assert_eq!(p.weight_mean(c(0.0, 0.0)), 0.0);
    }
}
