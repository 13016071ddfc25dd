use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind, HoleShape, Params};
use super::output::{emit_plot_data, write_atomic, EstimateRow, Results};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_critical_radius_at, estimate_crossing_curve, estimate_field_min_tail, estimate_region_events,
    estimate_uniqueness_curve, fit_exponential_decay, McEstimate, Region, RegionEvent,
};
use crate::lattice::{verify_discr1, verify_discr2, Verdict};
use crate::par;
use crate::sampler::{sample, write_points_csv, PointConfig};
use crate::seed::stream_seed;

struct Outcome {
    estimates: Vec<EstimateRow>,
    fit: Option<crate::estimators::DecayFit>,
    details: Value,
    points: Vec<(String, PointConfig)>,
}

impl Outcome {
    fn rows(series: &str, rows: Vec<(f64, McEstimate)>) -> Self {
        Outcome {
            estimates: rows
                .into_iter()
                .map(|(scale, estimate)| EstimateRow {
                    series: series.to_string(),
                    scale,
                    estimate,
                })
                .collect(),
            fit: None,
            details: Value::Null,
            points: Vec::new(),
        }
    }
}

/// Runs the experiment and returns its results without touching the disk.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Results> {
    run_inner(cfg).map(|(r, _)| r)
}

/// Runs the experiment and writes `results.json`, `results.csv`, the plot
/// series and, for `sample`, the point files into `dir`.
pub fn run_experiment_to(cfg: &ExperimentConfig, dir: &Path) -> Result<Results> {
    let (results, points) = run_inner(cfg)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, pc) in &points {
        write_points_csv(pc, &dir.join(name))?;
    }
    write_atomic(&dir.join("results.json"), &results.to_json_bytes()?)?;
    write_atomic(&dir.join("results.csv"), &results.to_csv_bytes()?)?;
    emit_plot_data(&results, dir)?;
    Ok(results)
}

fn run_inner(cfg: &ExperimentConfig) -> Result<(Results, Vec<(String, PointConfig)>)> {
    let start = Instant::now();
    let out = execute(cfg)?;
    let results = Results {
        experiment_kind: cfg.experiment_kind,
        process: cfg.process,
        params: cfg.params.clone(),
        estimates: out.estimates,
        fit: out.fit,
        details: out.details,
        wall_time: start.elapsed().as_secs_f64(),
        master_seed: cfg.master_seed,
        config: cfg.clone(),
        code_version: crate::CODE_VERSION.to_string(),
    };
    Ok((results, out.points))
}

fn decay_fit_or_note(rows: &[(f64, McEstimate)]) -> (Option<crate::estimators::DecayFit>, Value) {
    match fit_exponential_decay(rows) {
        Ok(fit) => (Some(fit), Value::Null),
        Err(e) => (None, json!({ "fit_error": e.to_string() })),
    }
}

fn verdict_summary(kind: &str, l: u64, verdicts: &[Verdict], master: u64, stream: u64) -> Outcome {
    let premise: Vec<bool> = verdicts.iter().map(|v| v.premise_holds).collect();
    let bad: Vec<bool> = verdicts.iter().map(Verdict::is_counterexample).collect();
    let counterexamples: Vec<usize> = bad.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
    let mut out = Outcome::rows(
        "premise",
        vec![(l as f64, McEstimate::from_hits(&premise, master, stream))],
    );
    out.estimates.push(EstimateRow {
        series: "counterexample".into(),
        scale: l as f64,
        estimate: McEstimate::from_hits(&bad, master, stream),
    });
    out.details = json!({
        "proposition": kind,
        "n_premise": premise.iter().filter(|&&p| p).count(),
        "n_conclusion": verdicts.iter().filter(|v| v.conclusion_holds).count(),
        "n_counterexamples": counterexamples.len(),
        "counterexample_replicas": counterexamples.iter().take(20).collect::<Vec<_>>(),
        "first_counterexample": counterexamples.first().map(|&i| &verdicts[i]),
    });
    out
}

fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.n_samples;
    let master = cfg.master_seed;
    let p = &cfg.process;
    match (&cfg.experiment_kind, &cfg.params) {
        (ExperimentKind::Sample, Params::Sample { half_width }) => {
            let stream = stream_seed(master, "sample", 0);
            let spec = p.spec(*half_width, stream)?;
            let configs = par::try_map_replicas(n, |i| sample(&spec, i))?;
            let counts: Vec<usize> = configs.iter().map(PointConfig::len).collect();
            let mut out = Outcome::rows("sample", Vec::new());
            out.details = json!({ "stream_seed": stream, "counts": counts });
            out.points = configs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (format!("points_{i:05}.csv"), c))
                .collect();
            Ok(out)
        }
        (ExperimentKind::Percolate, Params::Percolate { half_width, radii }) => {
            let spec = p.spec(*half_width, master)?;
            Ok(Outcome::rows(
                "crossing",
                estimate_crossing_curve(&spec, radii, *half_width, n)?,
            ))
        }
        (
            ExperimentKind::Rc,
            Params::Rc {
                l_schedule,
                tol,
                target,
            },
        ) => {
            let spec = p.spec(l_schedule[0], master)?;
            let rc = estimate_critical_radius_at(&spec, l_schedule, n, *tol, *target)?;
            let mut rows: Vec<(f64, McEstimate)> = rc
                .steps
                .iter()
                .filter(|s| s.l == rc.l)
                .map(|s| (s.r, s.estimate))
                .collect();
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            rows.dedup_by(|a, b| a.0 == b.0);
            let mut out = Outcome::rows("crossing", rows);
            out.details = serde_json::to_value(&rc)?;
            Ok(out)
        }
        (
            ExperimentKind::Hole,
            Params::Hole {
                shape,
                scales,
                theta,
                half_width,
            },
        ) => {
            let spec = p.spec(*half_width, master)?;
            let events: Vec<RegionEvent> = scales
                .iter()
                .map(|&s| RegionEvent::Hole {
                    region: match shape {
                        HoleShape::Disk => Region::disk(s),
                        HoleShape::Chain => Region::horizontal_chain(theta.expect("chain has theta"), s as usize),
                    },
                })
                .collect();
            let est = estimate_region_events(&spec, &events, n, "hole")?;
            let rows: Vec<(f64, McEstimate)> = scales.iter().cloned().zip(est).collect();
            let (fit, details) = match shape {
                HoleShape::Chain => decay_fit_or_note(&rows),
                HoleShape::Disk => (None, Value::Null),
            };
            let mut out = Outcome::rows("hole", rows);
            out.fit = fit;
            out.details = details;
            Ok(out)
        }
        (
            ExperimentKind::Overcrowd,
            Params::Overcrowd {
                theta,
                lengths,
                k,
                half_width,
            },
        ) => {
            let spec = p.spec(*half_width, master)?;
            let events: Vec<RegionEvent> = lengths
                .iter()
                .map(|&l| RegionEvent::Overcrowd {
                    region: Region::horizontal_chain(*theta, l as usize),
                    k: *k as usize,
                })
                .collect();
            let est = estimate_region_events(&spec, &events, n, "overcrowd")?;
            let rows: Vec<(f64, McEstimate)> = lengths.iter().cloned().zip(est).collect();
            let (fit, details) = decay_fit_or_note(&rows);
            let mut out = Outcome::rows("overcrowd", rows);
            out.fit = fit;
            out.details = details;
            Ok(out)
        }
        (ExperimentKind::Unique, Params::Unique { r, l_list }) => {
            let spec = p.spec(l_list[0], master)?;
            Ok(Outcome::rows(
                "multi_cluster",
                estimate_uniqueness_curve(&spec, *r, l_list, n)?,
            ))
        }
        (ExperimentKind::FieldMin, Params::FieldMin { nu, radii }) => {
            let rows = radii
                .iter()
                .map(|&r| Ok((r, estimate_field_min_tail(*nu, r, n, master)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::rows("field_min", rows))
        }
        (ExperimentKind::VerifyDiscr1, Params::VerifyDiscr1 { r, l, half_width }) => {
            let stream = stream_seed(master, "verify-discr1", 0);
            let spec = p.spec(*half_width, stream)?;
            let verdicts = par::try_map_replicas(n, |i| verify_discr1(&sample(&spec, i)?, *r, *l as i64))?;
            Ok(verdict_summary("discr1", *l, &verdicts, master, stream))
        }
        (
            ExperimentKind::VerifyDiscr2,
            Params::VerifyDiscr2 {
                r,
                theta,
                k,
                l,
                half_width,
            },
        ) => {
            let stream = stream_seed(master, "verify-discr2", 0);
            let spec = p.spec(*half_width, stream)?;
            let verdicts = par::try_map_replicas(n, |i| {
                verify_discr2(&sample(&spec, i)?, *r, *theta, *k as u32, *l as i64)
            })?;
            Ok(verdict_summary("discr2", *l, &verdicts, master, stream))
        }
        (kind, params) => Err(Error::Config(vec![format!(
            "params do not match experiment kind {}: {params:?}",
            kind.as_str()
        )])),
    }
}
