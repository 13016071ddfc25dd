use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn contperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contperc"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, doc: &Value) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path.display().to_string()
}

fn results(dir: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("results.json")).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn sample_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({
            "experiment_kind": "sample",
            "process": {"kind": "gaf"},
            "master_seed": 2,
            "n_samples": 2,
            "params": {"half_width": 2.0}
        }),
    );
    let out = tmp.path().join("out");
    let o = contperc(&["sample", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("points_00000.csv")).unwrap();
    assert!(text.starts_with("x,y\n"));
    assert!(out.join("points_00001.csv.json").exists());
    assert!(out.join("results.json").exists());
}

#[test]
fn discr2_radius_violation_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({
            "experiment_kind": "verify-discr2",
            "process": {"kind": "poisson", "intensity": 1.0},
            "master_seed": 1,
            "n_samples": 1,
            "params": {"r": 0.5, "theta": 2.0, "k": 1, "l": 2}
        }),
    );
    let out = tmp.path().join("out");
    let o = contperc(&["verify-discr2", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = std::fs::read_to_string(out.join("error.json")).unwrap();
    assert!(err.contains("r < theta/(18k)"), "{err}");
    assert!(!out.join("results.json").exists());
}

#[test]
fn subcommand_must_match_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({
            "experiment_kind": "sample",
            "process": {"kind": "poisson", "intensity": 1.0},
            "master_seed": 1,
            "n_samples": 1,
            "params": {"half_width": 2.0}
        }),
    );
    let o = contperc(&[
        "hole",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("experiment_kind"));
}

#[test]
fn missing_config_file_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let o = contperc(&["rc", "--config", tmp.path().join("nope.json").to_str().unwrap()]);
    assert!(!o.status.success());
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err.is_object(), "{err}");
}

#[test]
fn overrides_and_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({
            "experiment_kind": "percolate",
            "process": {"kind": "poisson", "intensity": 1.0},
            "master_seed": 1,
            "n_samples": 5,
            "params": {"half_width": 5.0, "radii": [0.5, 0.7]}
        }),
    );
    let run = |name: &str, extra: &[&str]| {
        let out = tmp.path().join(name);
        let mut args = vec!["percolate", "--config", &cfg, "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = contperc(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        results(&out)
    };
    let a = run("a", &["--seed", "17", "--replicas", "30", "--threads", "1"]);
    let b = run("b", &["--seed", "17", "--replicas", "30", "--threads", "4"]);
    assert_eq!(a, b);
    assert_eq!(a["config"]["master_seed"], 17);
    assert_eq!(a["config"]["n_samples"], 30);
    assert_eq!(a["estimates"][0]["estimate"]["n_samples"], 30);
    let c = run("c", &[]);
    assert_ne!(a, c);
}
