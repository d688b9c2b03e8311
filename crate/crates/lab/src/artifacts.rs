//! Report and series files. Every file is written to a temporary file in
//! its target directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::LabError;

pub const REPORT_FILE: &str = "report.json";
pub const SERIES_FILE: &str = "series.csv";
pub const SPECTRUM_FILE: &str = "spectrum.csv";

/// A measured quantity against its predicted counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    /// How `measured` must relate to `predicted`, e.g. `|m - p| <= 1e-6`.
    pub criterion: String,
    pub passed: bool,
}

impl Check {
    pub fn within(name: &str, measured: f64, predicted: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            measured,
            predicted,
            criterion: format!("|measured - predicted| <= {tolerance:e}"),
            passed: (measured - predicted).abs() <= tolerance,
        }
    }

    pub fn relative(name: &str, measured: f64, predicted: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            measured,
            predicted,
            criterion: format!("|measured/predicted - 1| <= {tolerance}"),
            passed: (measured / predicted - 1.0).abs() <= tolerance,
        }
    }

    pub fn at_most(name: &str, measured: f64, bound: f64) -> Check {
        Check {
            name: name.to_string(),
            measured,
            predicted: bound,
            criterion: "measured <= predicted".to_string(),
            passed: measured <= bound,
        }
    }

    pub fn at_least(name: &str, measured: f64, bound: f64) -> Check {
        Check {
            name: name.to_string(),
            measured,
            predicted: bound,
            criterion: "measured >= predicted".to_string(),
            passed: measured >= bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub config: RunConfig,
    pub status: Status,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(config: &RunConfig, results: Value, checks: Vec<Check>) -> Report {
        let passed = checks.iter().all(|c| c.passed);
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            experiment: config.experiment.name(),
            config: config.clone(),
            status: if passed { Status::Passed } else { Status::Failed },
            results,
            checks,
            passed,
            error: None,
        }
    }

    /// Diagnostic report of a run that stopped with an error.
    pub fn failure(config: &RunConfig, error: &LabError) -> Report {
        Report {
            status: Status::Error,
            passed: false,
            error: Some(error.to_string()),
            ..Report::new(config, Value::Null, Vec::new())
        }
    }
}

/// One row of `series.csv`; empty cells for quantities a flow lacks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub tau: f64,
    pub norm: f64,
    pub p_component: Option<f64>,
    pub weighted_eh_norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub abs_c0: f64,
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |source| LabError::Io { path: path.to_path_buf(), source }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), LabError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error(dir))?;
    tmp.write_all(bytes).map_err(io_error(path))?;
    tmp.as_file().sync_all().map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| LabError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| LabError::Csv { path: PathBuf::from("<memory>"), source: e };
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| LabError::Io { path: PathBuf::from("<memory>"), source: e.into_error() })
}

pub fn write_series(dir: &Path, rows: &[SeriesRow]) -> Result<PathBuf, LabError> {
    let bytes = csv_bytes(
        &["tau", "norm", "p_component", "weighted_eh_norm"],
        rows.iter().map(|r| vec![format_real(r.tau), format_real(r.norm), cell(r.p_component), cell(r.weighted_eh_norm)]),
    )?;
    let path = dir.join(SERIES_FILE);
    write_atomic(&path, &bytes)?;
    Ok(path)
}

pub fn write_spectrum(dir: &Path, rows: &[SpectrumRow]) -> Result<PathBuf, LabError> {
    let bytes = csv_bytes(
        &["re_lambda", "im_lambda", "abs_c0"],
        rows.iter().map(|r| vec![format_real(r.re_lambda), format_real(r.im_lambda), format_real(r.abs_c0)]),
    )?;
    let path = dir.join(SPECTRUM_FILE);
    write_atomic(&path, &bytes)?;
    Ok(path)
}

pub fn write_report(dir: &Path, report: &Report) -> Result<PathBuf, LabError> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(LabError::Json)?;
    bytes.push(b'\n');
    let path = dir.join(REPORT_FILE);
    write_atomic(&path, &bytes)?;
    Ok(path)
}
