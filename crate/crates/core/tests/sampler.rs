mod common;

use contperc::sampler::{
    ginibre_eigenvalues, read_points_csv, sample, write_points_csv, GafPolynomial, Point, PointConfig, RootFinder,
    SamplerSpec, Window,
};
use contperc::seed::replica_rng;
use contperc::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::Gamma;

fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

fn counts(spec: &SamplerSpec, n: u64) -> Vec<f64> {
    (0..n).map(|i| sample(spec, i).unwrap().len() as f64).collect()
}

#[test]
fn poisson_mean_count_on_10x10() {
    let spec = SamplerSpec::poisson(1.0, Window::centered(5.0).unwrap(), 11);
    let (m, _) = mean_and_sd(&counts(&spec, 10_000));
    // Poisson(100) mean over 1e4 replicas has sd 0.1
    assert!((m - 100.0).abs() < 3.0, "mean {m}");
    assert!((m - 100.0).abs() < 0.5, "mean {m}");
}

#[test]
fn zero_intensity_is_empty() {
    let spec = SamplerSpec::poisson(0.0, Window::centered(3.0).unwrap(), 1);
    assert!(sample(&spec, 0).unwrap().is_empty());
}

#[test]
fn ginibre_mean_count_on_6x6() {
    let spec = SamplerSpec::ginibre(Window::centered(3.0).unwrap(), 12);
    let (m, sd) = mean_and_sd(&counts(&spec, 200));
    let want = 36.0 / std::f64::consts::PI;
    assert!((m - want).abs() <= 3.0 * sd / 200f64.sqrt(), "mean {m} sd {sd}");
}

#[test]
fn gaf_mean_count_on_6x6() {
    let spec = SamplerSpec::gaf(Window::centered(3.0).unwrap(), 13);
    let (m, sd) = mean_and_sd(&counts(&spec, 200));
    let want = 36.0 / std::f64::consts::PI;
    assert!((m - want).abs() <= 3.0 * sd / 200f64.sqrt(), "mean {m} sd {sd}");
}

#[test]
fn one_by_one_ginibre_is_the_entry() {
    let mut a = replica_rng(5, 0);
    let mut b = replica_rng(5, 0);
    let ev = ginibre_eigenvalues(1, &mut a).unwrap();
    let re: f64 = b.sample(rand_distr::StandardNormal);
    let im: f64 = b.sample(rand_distr::StandardNormal);
    let entry = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(ev.len(), 1);
    assert!((ev[0] - entry).norm() < 1e-12);
}

#[test]
fn ginibre_moduli_match_independent_gammas() {
    let n = 50;
    let matrices = 2000;
    let mut pooled = Vec::with_capacity(n * matrices);
    for m in 0..matrices {
        let mut rng = replica_rng(77, m as u64);
        pooled.extend(ginibre_eigenvalues(n, &mut rng).unwrap().iter().map(|z| z.norm_sqr()));
    }
    let mut rng = replica_rng(78, 0);
    let mut oracle = Vec::with_capacity(n * matrices);
    for _ in 0..matrices {
        for k in 1..=n {
            oracle.push(rng.sample(Gamma::new(k as f64, 1.0).unwrap()));
        }
    }
    let p = common::ks_two_sample(&pooled, &oracle);
    assert!(p > 0.01, "KS p = {p}");
}

fn truncated_kernel(n: usize, r2: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= r2 / k as f64;
        sum += term;
    }
    sum * (-r2).exp()
}

#[test]
fn normalized_field_modulus_is_exponential() {
    for (i, z) in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        let r2 = z.norm_sqr();
        let degree = (r2 + 10.0 * (r2 + 1.0).sqrt()).ceil() as usize + 5;
        let mean = truncated_kernel(degree, r2);
        let draws: Vec<f64> = (0..10_000)
            .map(|k| {
                let mut rng = replica_rng(900 + i as u64, k);
                GafPolynomial::sample(degree, &mut rng)
                    .evaluate_normalized(z)
                    .norm_sqr()
            })
            .collect();
        let p = common::ks_one_sample(&draws, |x| 1.0 - (-x / mean).exp());
        assert!(p > 0.01, "z = {z}: KS p = {p}");
    }
}

fn all_roots(poly: &GafPolynomial) -> Vec<Complex64> {
    let region = Window::centered(poly.root_bound() * 1.05 + 1.0).unwrap();
    RootFinder::default().find(poly, &region).unwrap()
}

#[test]
fn root_sum_matches_vieta() {
    for (seed, degree) in [(1u64, 5usize), (2, 17), (3, 30), (4, 45), (5, 60)] {
        let poly = GafPolynomial::sample(degree, &mut replica_rng(seed, 0));
        let roots = all_roots(&poly);
        assert_eq!(roots.len(), degree);
        let xi = poly.coefficients();
        let want = -xi[degree - 1] * (degree as f64).sqrt() / xi[degree];
        let got: Complex64 = roots.iter().sum();
        assert!(
            (got - want).norm() <= 1e-6 * want.norm().max(1.0),
            "degree {degree}: {got} vs {want}"
        );
    }
}

#[test]
fn root_product_matches_vieta_at_degree_30() {
    let degree = 30;
    for seed in 10..15 {
        let poly = GafPolynomial::sample(degree, &mut replica_rng(seed, 0));
        let roots = all_roots(&poly);
        assert_eq!(roots.len(), degree);
        let xi = poly.coefficients();
        let ln_fact: f64 = (1..=degree).map(|k| (k as f64).ln()).sum();
        let sign = if degree % 2 == 0 { 1.0 } else { -1.0 };
        let want = sign * xi[0] * (0.5 * ln_fact).exp() / xi[degree];
        let got: Complex64 = roots.iter().product();
        assert!((got - want).norm() <= 1e-6 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn linear_polynomial_root() {
    let xi = [Complex64::new(0.3, -1.1), Complex64::new(-0.7, 0.4)];
    let poly = GafPolynomial::from_coefficients(xi.to_vec()).unwrap();
    let roots = all_roots(&poly);
    assert_eq!(roots.len(), 1);
    assert!((roots[0] + xi[0] / xi[1]).norm() < 1e-12);
}

#[test]
fn gaf_replicas_reconcile() {
    let finder = RootFinder::default();
    let window = Window::centered(6.0).unwrap();
    let spec = SamplerSpec::gaf(window, 21);
    for replica in 0..20 {
        let poly = GafPolynomial::sample(spec.model_order(), &mut replica_rng(21, replica));
        let roots = finder.find(&poly, &window).unwrap();
        assert_eq!(roots.len(), finder.winding_count(&poly, &window).unwrap());
        for z in &roots {
            assert!(poly.evaluate_normalized(*z).norm() < 1e-8);
        }
        let cfg = sample(&spec, replica).unwrap();
        assert_eq!(cfg.len(), roots.len());
    }
}

#[test]
fn replicas_are_reproducible() {
    let w = Window::centered(3.0).unwrap();
    for spec in [
        SamplerSpec::poisson(2.0, w, 3),
        SamplerSpec::ginibre(w, 3),
        SamplerSpec::gaf(w, 3),
    ] {
        let a = sample(&spec, 4).unwrap();
        let b = sample(&spec, 4).unwrap();
        assert_eq!(a.points, b.points);
        let c = sample(&spec, 5).unwrap();
        assert_ne!(a.points, c.points);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn points_csv_round_trip_is_exact(
        pts in proptest::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 0..40)
    ) {
        let w = Window::centered(4.0).unwrap();
        let mut pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        pts.dedup_by(|a, b| a == b);
        let cfg = PointConfig::external(w, pts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        write_points_csv(&cfg, &path).unwrap();
        let back = read_points_csv(&path).unwrap();
        prop_assert_eq!(back.points, cfg.points);
    }
}
