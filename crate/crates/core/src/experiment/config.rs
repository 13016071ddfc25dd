//! Experiment configuration documents and their validation.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::sampler::{ProcessKind, SamplerSpec, Window, DEFAULT_BUFFER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExperimentKind {
    #[serde(rename = "sample")]
    Sample,
    #[serde(rename = "percolate")]
    Percolate,
    #[serde(rename = "rc")]
    Rc,
    #[serde(rename = "hole")]
    Hole,
    #[serde(rename = "overcrowd")]
    Overcrowd,
    #[serde(rename = "unique")]
    Unique,
    #[serde(rename = "fieldmin")]
    FieldMin,
    #[serde(rename = "verify-discr1")]
    VerifyDiscr1,
    #[serde(rename = "verify-discr2")]
    VerifyDiscr2,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Sample,
        ExperimentKind::Percolate,
        ExperimentKind::Rc,
        ExperimentKind::Hole,
        ExperimentKind::Overcrowd,
        ExperimentKind::Unique,
        ExperimentKind::FieldMin,
        ExperimentKind::VerifyDiscr1,
        ExperimentKind::VerifyDiscr2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Sample => "sample",
            ExperimentKind::Percolate => "percolate",
            ExperimentKind::Rc => "rc",
            ExperimentKind::Hole => "hole",
            ExperimentKind::Overcrowd => "overcrowd",
            ExperimentKind::Unique => "unique",
            ExperimentKind::FieldMin => "fieldmin",
            ExperimentKind::VerifyDiscr1 => "verify-discr1",
            ExperimentKind::VerifyDiscr2 => "verify-discr2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProcessConfig {
    pub kind: ProcessKind,
    /// Points per unit area (`1/pi` for ginibre and gaf).
    pub intensity: f64,
    pub buffer: f64,
}

impl ProcessConfig {
    pub fn spec(&self, half_width: f64, master_seed: u64) -> Result<SamplerSpec> {
        Ok(SamplerSpec {
            process: self.kind,
            intensity: self.intensity,
            window: Window::centered(half_width)?,
            buffer: self.buffer,
            master_seed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoleShape {
    Disk,
    Chain,
}

/// Kind-specific parameters, all defaults resolved.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Sample {
        half_width: f64,
    },
    Percolate {
        half_width: f64,
        radii: Vec<f64>,
    },
    Rc {
        l_schedule: Vec<f64>,
        tol: f64,
        target: f64,
    },
    Hole {
        shape: HoleShape,
        /// Disk radii, or chain lengths in squares.
        scales: Vec<f64>,
        theta: Option<f64>,
        half_width: f64,
    },
    Overcrowd {
        theta: f64,
        lengths: Vec<f64>,
        k: u64,
        half_width: f64,
    },
    Unique {
        r: f64,
        l_list: Vec<f64>,
    },
    FieldMin {
        nu: f64,
        radii: Vec<f64>,
    },
    VerifyDiscr1 {
        r: f64,
        l: u64,
        half_width: f64,
    },
    VerifyDiscr2 {
        r: f64,
        theta: f64,
        k: u64,
        l: u64,
        half_width: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment_kind: ExperimentKind,
    pub process: ProcessConfig,
    pub master_seed: u64,
    pub n_samples: u64,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl ExperimentConfig {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Field reader for one JSON object: records every problem instead of
/// stopping at the first, and flags keys nobody asked for.
struct Fields<'a, 'e> {
    obj: Option<&'a Map<String, Value>>,
    path: &'a str,
    seen: Vec<&'static str>,
    errors: &'e mut Vec<String>,
}

impl<'a, 'e> Fields<'a, 'e> {
    fn new(value: Option<&'a Value>, path: &'a str, errors: &'e mut Vec<String>) -> Self {
        let obj = match value {
            Some(Value::Object(m)) => Some(m),
            Some(_) => {
                errors.push(format!("{path}: expected an object"));
                None
            }
            None => None,
        };
        Fields {
            obj,
            path,
            seen: Vec::new(),
            errors,
        }
    }

    fn name(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.push(key);
        self.obj.and_then(|m| m.get(key)).filter(|v| !v.is_null())
    }

    fn missing(&mut self, key: &'static str) {
        let n = self.name(key);
        self.errors.push(format!("{n}: required field missing"));
    }

    fn number(&mut self, key: &'static str, required: bool) -> Option<f64> {
        match self.raw(key) {
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                _ => {
                    let n = self.name(key);
                    self.errors.push(format!("{n}: expected a finite number"));
                    None
                }
            },
            None => {
                if required {
                    self.missing(key);
                }
                None
            }
        }
    }

    fn req_f64(&mut self, key: &'static str, rule: &str, ok: impl Fn(f64) -> bool) -> Option<f64> {
        let v = self.number(key, true)?;
        self.check(key, v, rule, ok)
    }

    fn opt_f64(&mut self, key: &'static str, default: f64, rule: &str, ok: impl Fn(f64) -> bool) -> Option<f64> {
        match self.number(key, false) {
            Some(v) => self.check(key, v, rule, ok),
            None => Some(default),
        }
    }

    fn check(&mut self, key: &'static str, v: f64, rule: &str, ok: impl Fn(f64) -> bool) -> Option<f64> {
        if ok(v) {
            Some(v)
        } else {
            let n = self.name(key);
            self.errors.push(format!("{n}: must satisfy {rule}, got {v}"));
            None
        }
    }

    fn integer(&mut self, key: &'static str, required: bool) -> Option<u64> {
        match self.raw(key) {
            Some(v) => match v.as_u64() {
                Some(x) => Some(x),
                None => {
                    let n = self.name(key);
                    self.errors.push(format!("{n}: expected a non-negative integer"));
                    None
                }
            },
            None => {
                if required {
                    self.missing(key);
                }
                None
            }
        }
    }

    fn req_u64(&mut self, key: &'static str, min: u64) -> Option<u64> {
        let v = self.integer(key, true)?;
        if v < min {
            let n = self.name(key);
            self.errors.push(format!("{n}: must satisfy >= {min}, got {v}"));
            return None;
        }
        Some(v)
    }

    fn list(&mut self, key: &'static str, rule: &str, ok: impl Fn(f64) -> bool, increasing: bool) -> Option<Vec<f64>> {
        let Some(v) = self.raw(key) else {
            self.missing(key);
            return None;
        };
        let n = self.name(key);
        let Some(items) = v.as_array() else {
            self.errors.push(format!("{n}: expected a list of numbers"));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item.as_f64() {
                Some(x) if x.is_finite() && ok(x) => out.push(x),
                _ => {
                    self.errors.push(format!("{n}[{i}]: must be a number with {rule}"));
                    return None;
                }
            }
        }
        if out.is_empty() {
            self.errors.push(format!("{n}: must not be empty"));
            return None;
        }
        if increasing && out.windows(2).any(|w| w[0] >= w[1]) {
            self.errors.push(format!("{n}: must be strictly increasing"));
            return None;
        }
        Some(out)
    }

    fn string(&mut self, key: &'static str, required: bool) -> Option<&'a str> {
        match self.raw(key) {
            Some(Value::String(s)) => Some(s.as_str()),
            Some(_) => {
                let n = self.name(key);
                self.errors.push(format!("{n}: expected a string"));
                None
            }
            None => {
                if required {
                    self.missing(key);
                }
                None
            }
        }
    }

    fn finish(self) {
        if let Some(m) = self.obj {
            let mut unknown: Vec<&String> = m.keys().filter(|k| !self.seen.contains(&k.as_str())).collect();
            unknown.sort();
            for k in unknown {
                let n = if self.path.is_empty() {
                    k.clone()
                } else {
                    format!("{}.{k}", self.path)
                };
                self.errors.push(format!("{n}: unknown key"));
            }
        }
    }
}

fn positive(x: f64) -> bool {
    x > 0.0
}

/// Parses and validates a configuration document, reporting every problem.
pub fn validate_config(raw: &str) -> Result<ExperimentConfig> {
    let doc: Value = if raw.trim().is_empty() {
        Value::Object(Map::new())
    } else {
        serde_json::from_str(raw).map_err(|e| Error::Config(vec![format!("malformed JSON: {e}")]))?
    };
    validate_value(&doc)
}

pub fn validate_value(doc: &Value) -> Result<ExperimentConfig> {
    let mut errors = Vec::new();
    if !doc.is_object() {
        return Err(Error::Config(vec!["document: expected an object".into()]));
    }
    let (kind, process_raw, master_seed, n_samples, params_raw, output_dir) = {
        let mut top = Fields::new(Some(doc), "", &mut errors);
        let kind = top.string("experiment_kind", true);
        let process_raw = top.raw("process");
        let master_seed = top.integer("master_seed", true);
        let n_samples = top.req_u64("n_samples", 1);
        let params_raw = top.raw("params");
        let output_dir = top.string("output_dir", false).map(str::to_string);
        let kind = kind.and_then(|k| {
            let parsed = ExperimentKind::parse(k);
            if parsed.is_none() {
                top.errors.push(format!(
                    "experiment_kind: unknown kind {k:?}, expected one of {}",
                    ExperimentKind::ALL.map(|k| k.as_str()).join(", ")
                ));
            }
            parsed
        });
        if process_raw.is_none() {
            top.missing("process");
        }
        if params_raw.is_none() {
            top.missing("params");
        }
        top.finish();
        (kind, process_raw, master_seed, n_samples, params_raw, output_dir)
    };

    let process = process_raw.and_then(|v| parse_process(v, &mut errors));
    let params = match (kind, params_raw) {
        (Some(k), Some(v)) => parse_params(k, v, process.as_ref(), &mut errors),
        _ => None,
    };
    match (kind, process, master_seed, n_samples, params) {
        (Some(experiment_kind), Some(process), Some(master_seed), Some(n_samples), Some(params))
            if errors.is_empty() =>
        {
            Ok(ExperimentConfig {
                experiment_kind,
                process,
                master_seed,
                n_samples,
                params,
                output_dir,
            })
        }
        _ => Err(Error::Config(errors)),
    }
}

fn parse_process(v: &Value, errors: &mut Vec<String>) -> Option<ProcessConfig> {
    let mut f = Fields::new(Some(v), "process", errors);
    let kind = f.string("kind", true).and_then(|k| {
        let kind = match k {
            "poisson" => Some(ProcessKind::Poisson),
            "ginibre" => Some(ProcessKind::Ginibre),
            "gaf" => Some(ProcessKind::Gaf),
            _ => None,
        };
        if kind.is_none() {
            f.errors.push(format!(
                "process.kind: unknown process {k:?}, expected poisson, ginibre or gaf"
            ));
        }
        kind
    });
    let out = match kind {
        Some(ProcessKind::Poisson) => {
            let intensity = f.req_f64("intensity", ">= 0", |x| x >= 0.0);
            let buffer = f.opt_f64("buffer", 0.0, ">= 0", |x| x >= 0.0);
            intensity.zip(buffer).map(|(intensity, buffer)| ProcessConfig {
                kind: ProcessKind::Poisson,
                intensity,
                buffer,
            })
        }
        Some(k) => {
            let pi_inv = std::f64::consts::FRAC_1_PI;
            let intensity = f.opt_f64("intensity", pi_inv, "= 1/pi (fixed by the process)", |x| {
                (x - pi_inv).abs() < 1e-12
            });
            let buffer = f.opt_f64("buffer", DEFAULT_BUFFER, ">= 0", |x| x >= 0.0);
            intensity.zip(buffer).map(|(intensity, buffer)| ProcessConfig {
                kind: k,
                intensity,
                buffer,
            })
        }
        None => {
            f.raw("intensity");
            f.raw("buffer");
            None
        }
    };
    f.finish();
    out
}

fn parse_params(
    kind: ExperimentKind,
    v: &Value,
    process: Option<&ProcessConfig>,
    errors: &mut Vec<String>,
) -> Option<Params> {
    let mut f = Fields::new(Some(v), "params", errors);
    let p = match kind {
        ExperimentKind::Sample => f
            .req_f64("half_width", "> 0", positive)
            .map(|half_width| Params::Sample { half_width }),
        ExperimentKind::Percolate => {
            let hw = f.req_f64("half_width", "> 0", positive);
            let radii = f.list("radii", "> 0", positive, false);
            hw.zip(radii)
                .map(|(half_width, radii)| Params::Percolate { half_width, radii })
        }
        ExperimentKind::Rc => {
            let sched = f.list("l_schedule", "> 0", positive, true);
            let tol = f.opt_f64("tol", 0.01, "> 0", positive);
            let target = f.opt_f64("target", 0.5, "0 < target < 1", |x| x > 0.0 && x < 1.0);
            match (sched, tol, target) {
                (Some(l_schedule), Some(tol), Some(target)) => Some(Params::Rc {
                    l_schedule,
                    tol,
                    target,
                }),
                _ => None,
            }
        }
        ExperimentKind::Hole => {
            let shape = f.string("shape", true).and_then(|s| match s {
                "disk" => Some(HoleShape::Disk),
                "chain" => Some(HoleShape::Chain),
                _ => {
                    f.errors
                        .push(format!("params.shape: expected \"disk\" or \"chain\", got {s:?}"));
                    None
                }
            });
            let theta = match shape {
                Some(HoleShape::Chain) => f.req_f64("theta", "> 0", positive).map(Some),
                _ => {
                    if f.raw("theta").is_some() {
                        f.errors.push("params.theta: only valid for shape \"chain\"".into());
                        None
                    } else {
                        Some(None)
                    }
                }
            };
            let scales = match shape {
                Some(HoleShape::Chain) => f.list("scales", "integer >= 1", |x| x >= 1.0 && x.fract() == 0.0, true),
                _ => f.list("scales", ">= 0", |x| x >= 0.0, true),
            };
            let hw = f.number("half_width", false);
            match (shape, theta, scales) {
                (Some(shape), Some(theta), Some(scales)) => {
                    let needed = match shape {
                        HoleShape::Disk => scales.iter().cloned().fold(0.0, f64::max),
                        HoleShape::Chain => {
                            let th = theta.expect("chain has theta");
                            scales
                                .iter()
                                .map(|&l| crate::estimators::Region::horizontal_chain(th, l as usize).sup_extent())
                                .fold(0.0, f64::max)
                        }
                    };
                    resolve_half_width(&mut f, hw, needed).map(|half_width| Params::Hole {
                        shape,
                        scales,
                        theta,
                        half_width,
                    })
                }
                _ => None,
            }
        }
        ExperimentKind::Overcrowd => {
            let theta = f.req_f64("theta", "> 0", positive);
            let lengths = f.list("lengths", "integer >= 1", |x| x >= 1.0 && x.fract() == 0.0, true);
            let k = f.integer("k", true);
            let hw = f.number("half_width", false);
            match (theta, lengths, k) {
                (Some(theta), Some(lengths), Some(k)) => {
                    let needed = lengths
                        .iter()
                        .map(|&l| crate::estimators::Region::horizontal_chain(theta, l as usize).sup_extent())
                        .fold(0.0, f64::max);
                    resolve_half_width(&mut f, hw, needed).map(|half_width| Params::Overcrowd {
                        theta,
                        lengths,
                        k,
                        half_width,
                    })
                }
                _ => None,
            }
        }
        ExperimentKind::Unique => {
            let r = f.req_f64("r", "> 0", positive);
            let l_list = f.list("l_list", "> 0", positive, true);
            r.zip(l_list).map(|(r, l_list)| Params::Unique { r, l_list })
        }
        ExperimentKind::FieldMin => {
            let nu = f.req_f64("nu", "> 2", |x| x > 2.0);
            let radii = f.list("radii", "> 1", |x| x > 1.0, false);
            if process.is_some_and(|p| p.kind != ProcessKind::Gaf) {
                f.errors.push("process.kind: fieldmin requires the gaf process".into());
            }
            nu.zip(radii).map(|(nu, radii)| Params::FieldMin { nu, radii })
        }
        ExperimentKind::VerifyDiscr1 => {
            let r = f.req_f64("r", "> 0", positive);
            let l = f.req_u64("l", 1);
            let hw = f.number("half_width", false);
            match (r, l) {
                (Some(r), Some(l)) => {
                    let needed = l as f64 * r / 5f64.sqrt();
                    resolve_half_width(&mut f, hw, needed).map(|half_width| Params::VerifyDiscr1 { r, l, half_width })
                }
                _ => None,
            }
        }
        ExperimentKind::VerifyDiscr2 => {
            let r = f.req_f64("r", "> 0", positive);
            let theta = f.req_f64("theta", "> 0", positive);
            let k = f.integer("k", true);
            let l = f.req_u64("l", 1);
            let hw = f.number("half_width", false);
            match (r, theta, k, l) {
                (Some(r), Some(theta), Some(k), Some(l)) => {
                    if k > 0 && !(r < theta / (18.0 * k as f64)) {
                        f.errors.push(format!(
                            "params.r: violates r < theta/(18k) (r = {r}, theta = {theta}, k = {k})"
                        ));
                        None
                    } else {
                        let needed = l as f64 * theta;
                        resolve_half_width(&mut f, hw, needed).map(|half_width| Params::VerifyDiscr2 {
                            r,
                            theta,
                            k,
                            l,
                            half_width,
                        })
                    }
                }
                _ => None,
            }
        }
    };
    f.finish();
    p
}

fn resolve_half_width(f: &mut Fields<'_, '_>, given: Option<f64>, needed: f64) -> Option<f64> {
    match given {
        None => Some(needed.max(f64::MIN_POSITIVE)),
        Some(hw) if hw > 0.0 && hw >= needed => Some(hw),
        Some(hw) => {
            f.errors.push(format!(
                "params.half_width: must be > 0 and cover the region (>= {needed}), got {hw}"
            ));
            None
        }
    }
}
