//! Batch driver for the blow-up experiments: resolves a run configuration,
//! runs one experiment or the whole suite, and writes `report.json` plus
//! `series.csv` or `spectrum.csv` into the output directory.
//!
//! Exit status is 0 when every check passes, 1 on a failed check or a
//! numerical failure (a diagnostic `report.json` is still written) and 2 on
//! invalid usage.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod config;
pub mod experiments;
pub mod fit;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, Parser};
use rayon::prelude::*;
use serde_json::json;

use artifacts::{write_report, write_series, write_spectrum, Check, Report, Status};
use config::{Cli, Experiment, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] blowup_core::Error),
    #[error("degenerate series: {0}")]
    Degenerate(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("cannot serialize report: {0}")]
    Json(serde_json::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Runs one experiment and writes its artifacts. A failing experiment still
/// leaves a diagnostic report behind before the error is returned.
pub fn run_single(config: &RunConfig) -> Result<Report, LabError> {
    let dir = &config.output_path;
    let output = match experiments::run_experiment(config) {
        Ok(output) => output,
        Err(e) => {
            // The original error matters more than a failure to record it.
            let _ = write_report(dir, &Report::failure(config, &e));
            return Err(e);
        }
    };
    if let Some(rows) = &output.series {
        write_series(dir, rows)?;
    }
    if let Some(rows) = &output.spectrum {
        write_spectrum(dir, rows)?;
    }
    let report = Report::new(config, output.results, output.checks);
    write_report(dir, &report)?;
    Ok(report)
}

/// Runs every suite experiment in parallel, each into its own
/// subdirectory, and writes a summary report whose checks collect all of
/// theirs.
pub fn run_suite(config: &RunConfig) -> Result<Report, LabError> {
    let outcomes: Vec<(Experiment, Result<Report, LabError>)> = Experiment::SUITE
        .par_iter()
        .map(|&e| (e, run_single(&config.for_experiment(e, config.output_path.join(e.name())))))
        .collect();
    let mut checks = Vec::new();
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    for (e, outcome) in &outcomes {
        match outcome {
            Ok(report) => {
                checks.extend(report.checks.iter().map(|c| Check { name: format!("{}: {}", e.name(), c.name), ..c.clone() }));
                entries.push(json!({ "experiment": e.name(), "status": report.status, "passed": report.passed }));
            }
            Err(err) => {
                errors.push(format!("{}: {err}", e.name()));
                entries.push(json!({ "experiment": e.name(), "status": Status::Error, "error": err.to_string() }));
            }
        }
    }
    let mut report = Report::new(config, json!({ "experiments": entries }), checks);
    if !errors.is_empty() {
        report.status = Status::Error;
        report.passed = false;
        report.error = Some(errors.join("; "));
    }
    write_report(&config.output_path, &report)?;
    Ok(report)
}

pub fn run(config: &RunConfig) -> Result<Report, LabError> {
    match config.experiment {
        Experiment::FullSuite => run_suite(config),
        _ => run_single(config),
    }
}

fn print_summary(report: &Report, config: &RunConfig) {
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: measured {:e}, predicted {:e} ({})", c.name, c.measured, c.predicted, c.criterion);
    }
    if let Some(e) = &report.error {
        println!("ERROR {e}");
    }
    println!("{} {}: report in {}", report.experiment, if report.passed { "passed" } else { "failed" }, config.output_path.display());
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return e.exit_code();
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}\n\nUsage: blowup-lab <EXPERIMENT> [OPTIONS]; see --help");
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(report) => {
            print_summary(&report, &config);
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
