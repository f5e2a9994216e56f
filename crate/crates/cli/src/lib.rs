//! Experiment harness: TOML run configs, layerwise optimization sweeps over
//! register sizes, JSON run records and tab-separated plot series.

pub mod config;
pub mod emit;
pub mod error;
pub mod record;
pub mod runner;

pub use config::RunConfig;
pub use emit::{emit_plot_data, PlotSeries};
pub use error::HarnessError;
pub use record::{CellResult, EvaluationRecord, ProbeSource, RunRecord};
pub use runner::{persist_run, run_bounds, run_evaluate, run_optimize};
