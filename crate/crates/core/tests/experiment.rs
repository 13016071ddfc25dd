use std::path::Path;

use contperc::experiment::{
    run_experiment, run_experiment_to, validate_config, validate_value, ExperimentConfig, PLOT_HEADER,
};
use contperc::par::with_threads;
use contperc::sampler::read_points_csv;
use contperc::Error;
use proptest::prelude::*;
use serde_json::{json, Value};

fn config(doc: Value) -> ExperimentConfig {
    validate_value(&doc).unwrap()
}

fn without_wall_time(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sample_writes_points_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(json!({
        "experiment_kind": "sample",
        "process": {"kind": "poisson", "intensity": 2.0},
        "master_seed": 1,
        "n_samples": 3,
        "params": {"half_width": 2.0}
    }));
    let res = run_experiment_to(&cfg, dir.path()).unwrap();
    for i in 0..3 {
        let path = dir.path().join(format!("points_{i:05}.csv"));
        assert!(read(&path).starts_with("x,y\n"));
        let meta: Value = serde_json::from_str(&read(&dir.path().join(format!("points_{i:05}.csv.json")))).unwrap();
        assert_eq!(meta["process"], "poisson");
        assert_eq!(meta["replica"], i);
        assert_eq!(
            Value::from(read_points_csv(&path).unwrap().len()),
            res.details["counts"][i]
        );
    }
    let results: Value = serde_json::from_str(&read(&dir.path().join("results.json"))).unwrap();
    assert_eq!(results["config"]["process"]["buffer"], 0.0);
    assert!(results["code_version"].as_str().unwrap().starts_with("contperc "));
}

#[test]
fn identical_configs_give_identical_results() {
    let cfg = config(json!({
        "experiment_kind": "percolate",
        "process": {"kind": "poisson", "intensity": 1.0},
        "master_seed": 9,
        "n_samples": 40,
        "params": {"half_width": 6.0, "radii": [0.4, 0.6, 0.8]}
    }));
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    with_threads(Some(1), || run_experiment_to(&cfg, a.path())).unwrap();
    with_threads(Some(8), || run_experiment_to(&cfg, b.path())).unwrap();
    let ja = std::fs::read(a.path().join("results.json")).unwrap();
    let jb = std::fs::read(b.path().join("results.json")).unwrap();
    assert_eq!(without_wall_time(&ja), without_wall_time(&jb));
    for name in ["results.csv", "crossing_vs_r.csv"] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)));
    }
}

#[test]
fn rc_writes_crossing_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(json!({
        "experiment_kind": "rc",
        "process": {"kind": "poisson", "intensity": 1.0},
        "master_seed": 3,
        "n_samples": 50,
        "params": {"l_schedule": [4.0, 8.0], "tol": 0.02}
    }));
    let res = run_experiment_to(&cfg, dir.path()).unwrap();
    let text = read(&dir.path().join("crossing_vs_r.csv"));
    assert_eq!(text.lines().next().unwrap(), PLOT_HEADER.join(","));
    assert_eq!(text.lines().count(), res.estimates.len() + 1);
    assert!(res.details["r_hat"].as_f64().unwrap() > 0.0);
}

#[test]
fn hole_chain_series_flags_censored_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(json!({
        "experiment_kind": "hole",
        "process": {"kind": "poisson", "intensity": 1.0},
        "master_seed": 4,
        "n_samples": 200,
        "params": {"shape": "chain", "theta": 1.0, "scales": [1, 2, 3, 6]}
    }));
    run_experiment_to(&cfg, dir.path()).unwrap();
    let text = read(&dir.path().join("log_hole_vs_L.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scale,value,ci_low,ci_high,censored");
    // e^{-6} * 200 is about 0.5 expected hits at L = 6
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last.len(), 5);
    if last[4] == "1" {
        assert_eq!(last[1], "");
    }
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 5));
}

#[test]
fn header_does_not_depend_on_size() {
    let mut headers = Vec::new();
    for radii in [vec![0.5], vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8]] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(json!({
            "experiment_kind": "percolate",
            "process": {"kind": "poisson", "intensity": 1.0},
            "master_seed": 5,
            "n_samples": 5,
            "params": {"half_width": 3.0, "radii": radii}
        }));
        run_experiment_to(&cfg, dir.path()).unwrap();
        headers.push(
            read(&dir.path().join("crossing_vs_r.csv"))
                .lines()
                .next()
                .unwrap()
                .to_string(),
        );
    }
    assert_eq!(headers[0], headers[1]);
}

#[test]
fn discr2_radius_bound_is_enforced() {
    let err = validate_config(
        r#"{"experiment_kind": "verify-discr2", "process": {"kind": "poisson", "intensity": 1.0},
            "master_seed": 1, "n_samples": 1, "params": {"r": 0.2, "theta": 2.0, "k": 1, "l": 2}}"#,
    )
    .unwrap_err();
    assert!(err.to_string().contains("r < theta/(18k)"), "{err}");
}

#[test]
fn verify_experiment_reports_counts() {
    let cfg = config(json!({
        "experiment_kind": "verify-discr1",
        "process": {"kind": "poisson", "intensity": 5.0},
        "master_seed": 6,
        "n_samples": 100,
        "params": {"r": 1.0, "l": 4}
    }));
    let res = run_experiment(&cfg).unwrap();
    assert_eq!(res.details["n_counterexamples"], 0);
    assert!(res.details["n_premise"].as_u64().unwrap() <= 100);
}

#[test]
fn empty_document_names_every_required_field() {
    let Err(Error::Config(errors)) = validate_config("") else {
        panic!("expected a config error");
    };
    for field in ["experiment_kind", "process", "master_seed", "n_samples", "params"] {
        assert!(
            errors.iter().any(|e| e.starts_with(field)),
            "{field} missing from {errors:?}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valid_configs_round_trip(
        seed in any::<u64>(),
        n in 1u64..10_000,
        intensity in 0.01f64..10.0,
        radii in proptest::collection::vec(0.01f64..3.0, 1..6),
        half_width in 1.0f64..50.0,
    ) {
        let cfg = config(json!({
            "experiment_kind": "percolate",
            "process": {"kind": "poisson", "intensity": intensity},
            "master_seed": seed,
            "n_samples": n,
            "params": {"half_width": half_width, "radii": radii}
        }));
        let again = validate_value(&cfg.to_json()).unwrap();
        prop_assert_eq!(&again, &cfg);
        let text = serde_json::to_string(&cfg.to_json()).unwrap();
        prop_assert_eq!(validate_config(&text).unwrap(), cfg);
    }
}
