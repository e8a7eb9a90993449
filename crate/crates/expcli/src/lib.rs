//! Experiment registry, configs and deterministic reports on top of
//! `ipstar-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod rng;

use std::time::Instant;

use ipstar_core::{Exec, SearchConfig};

pub use config::{ExperimentConfig, ExperimentKind, Format, Params};
pub use error::{LabError, Result};
pub use report::Report;

/// Runs one experiment and assembles its report. Nothing is written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    run_experiment_with(cfg, Exec::default())
}

pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let search = SearchConfig {
        guards: cfg.guards.clone(),
        exec,
    };
    let start = Instant::now();
    let outcome = experiments::run(cfg, &search)?;
    Report::assemble(cfg, outcome, start.elapsed().as_millis() as u64)
}

/// Writes the report to `cfg.output` atomically, or returns it for stdout.
pub fn emit(report: &Report, cfg: &ExperimentConfig) -> Result<Option<String>> {
    let text = report.render(cfg.format);
    match &cfg.output {
        Some(path) => {
            report::write_atomic(path, text.as_bytes())?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
