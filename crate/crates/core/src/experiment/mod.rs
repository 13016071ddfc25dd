//! Batch experiments: validated configuration in, results JSON and CSV out.

mod config;
mod output;
mod run;

pub use config::{validate_config, validate_value, ExperimentConfig, ExperimentKind, HoleShape, Params, ProcessConfig};
pub use output::{emit_plot_data, error_json, write_atomic, EstimateRow, Results, PLOT_HEADER};
pub use run::{run_experiment, run_experiment_to};
