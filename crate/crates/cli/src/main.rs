use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contperc::experiment::{error_json, run_experiment_to, validate_value, write_atomic, ExperimentConfig};
use contperc::par::with_threads;
use contperc::Error;
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "contperc",
    version,
    about = "Continuum percolation experiments on Ginibre, GAF zero and Poisson points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw point configurations and write them as CSV.
    Sample(RunArgs),
    /// Crossing probability against the disk radius.
    Percolate(RunArgs),
    /// Critical radius by bisection over a schedule of box sizes.
    Rc(RunArgs),
    /// Hole probabilities on square chains or disks.
    Hole(RunArgs),
    /// Overcrowding probabilities on square chains.
    Overcrowd(RunArgs),
    /// Probability of two or more annulus-crossing clusters.
    Unique(RunArgs),
    /// Lower tail of the minimum of the normalized GAF on circles.
    Fieldmin(RunArgs),
    /// Check the first discretization statement on random configurations.
    #[command(name = "verify-discr1")]
    VerifyDiscr1(RunArgs),
    /// Check the second discretization statement on random configurations.
    #[command(name = "verify-discr2")]
    VerifyDiscr2(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `n_samples`.
    #[arg(long)]
    replicas: Option<u64>,
    /// Worker threads. Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

impl Command {
    fn split(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Sample(a) => ("sample", a),
            Command::Percolate(a) => ("percolate", a),
            Command::Rc(a) => ("rc", a),
            Command::Hole(a) => ("hole", a),
            Command::Overcrowd(a) => ("overcrowd", a),
            Command::Unique(a) => ("unique", a),
            Command::Fieldmin(a) => ("fieldmin", a),
            Command::VerifyDiscr1(a) => ("verify-discr1", a),
            Command::VerifyDiscr2(a) => ("verify-discr2", a),
        }
    }
}

fn load(kind: &str, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| Error::Io {
        path: args.config.display().to_string(),
        source,
    })?;
    let mut doc: Value = if text.trim().is_empty() {
        Value::Object(Default::default())
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Config(vec![format!("malformed JSON: {e}")]))?
    };
    if let Value::Object(m) = &mut doc {
        if let Some(seed) = args.seed {
            m.insert("master_seed".into(), seed.into());
        }
        if let Some(n) = args.replicas {
            m.insert("n_samples".into(), n.into());
        }
    }
    if let Some(found) = doc.get("experiment_kind").and_then(Value::as_str) {
        if found != kind {
            return Err(Error::Config(vec![format!(
                "experiment_kind: config says {found:?} but the subcommand is {kind:?}"
            )]));
        }
    }
    validate_value(&doc)
}

fn out_dir(args: &RunArgs, cfg: Option<&ExperimentConfig>) -> PathBuf {
    args.out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output_dir.as_ref().map(PathBuf::from)))
        .unwrap_or_else(|| PathBuf::from("contperc-out"))
}

fn report_error(err: &Error, dir: Option<&Path>) {
    let doc = error_json(err);
    let text = serde_json::to_string_pretty(&doc).unwrap_or_else(|_| err.to_string());
    eprintln!("{text}");
    if let Some(dir) = dir {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = write_atomic(&dir.join("error.json"), format!("{text}\n").as_bytes());
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let cfg = match load(kind, args) {
        Ok(cfg) => cfg,
        Err(err) => {
            report_error(&err, args.out.as_deref());
            return ExitCode::from(2);
        }
    };
    let dir = out_dir(args, Some(&cfg));
    match with_threads(args.threads, || run_experiment_to(&cfg, &dir)) {
        Ok(results) => {
            println!(
                "{} finished in {:.2}s, results in {}",
                kind,
                results.wall_time,
                dir.join("results.json").display()
            );
            ExitCode::SUCCESS
        }
        Err(err) => {
            report_error(&err, Some(&dir));
            match err {
                Error::Config(_) | Error::Parameter { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
