//! Configuration-driven experiment runner for the `pathint` library.
//!
//! Each experiment is a named entry in [`REGISTRY`] with a typed parameter
//! schema. [`run`] resolves a config against that schema, runs the
//! experiment with a seeded random stream, writes CSV tables and a
//! plain-text report to the output directory and returns the metrics.

mod config;
mod error;
mod experiments;
mod params;
mod report;

use std::time::Instant;

use pathint::wiener::RngStream;

pub use config::{parse_overrides, ExperimentConfig, OUTPUT_DIR_ENV};
pub use error::{CliError, Result};
pub use experiments::{exp_double_sum, ExperimentInfo, REGISTRY};
pub use params::{ParamKind, ParamSpec, Params};
pub use report::{Cell, ExperimentReport, Metric, Table};

/// Stream id used for every experiment's root random stream.
const ROOT_STREAM: u64 = 0;

/// Registered experiments as `(name, schema, description)`, sorted by name.
pub fn list_experiments() -> Vec<(&'static str, &'static [ParamSpec], &'static str)> {
    REGISTRY.iter().map(|e| (e.name, e.params, e.description)).collect()
}

/// Runs one experiment and writes its artifacts.
///
/// Artifacts are `<table>.csv` files plus `<experiment>_report.txt` in
/// `config.output_dir`, which is created if needed.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let info = experiments::find(&config.experiment)?;
    let params = Params::resolve(info.name, info.params, &config.params)?;
    report::create_dir(&config.output_dir)?;
    let start = Instant::now();
    let (metrics, tables) = (info.runner)(&params, &RngStream::new(config.seed, ROOT_STREAM))?;
    let wall_time = start.elapsed();

    let mut artifacts = Vec::with_capacity(tables.len() + 1);
    for t in &tables {
        let path = config.output_dir.join(&t.file);
        report::write_file(&path, &t.to_csv())?;
        artifacts.push(path);
    }
    let report_path = config.output_dir.join(format!("{}_report.txt", info.name));
    artifacts.push(report_path.clone());
    let report = ExperimentReport {
        name: info.name.to_string(),
        seed: config.seed,
        parameters: params.entries().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        metrics,
        artifacts,
        wall_time,
    };
    report::write_file(&report_path, &report.to_text())?;
    log_report(&report);
    Ok(report)
}

fn log_report(report: &ExperimentReport) {
    for m in report.metrics.iter().filter(|m| !m.pass) {
        eprintln!(
            "warning: metric {} = {} violates {} {}",
            m.name, m.value, m.relation, m.tolerance
        );
    }
}
