//! Run configuration: defaults, then a flat `key = value` file, then the
//! command line, validated before anything is dispatched.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Serialize, Serializer};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    LinearDecay,
    Projection,
    NonlinearRun,
    Modulate,
    MainTheorem,
    FullSuite,
    Fit,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::LinearDecay => "linear-decay",
            Experiment::Projection => "projection",
            Experiment::NonlinearRun => "nonlinear-run",
            Experiment::Modulate => "modulate",
            Experiment::MainTheorem => "main-theorem",
            Experiment::FullSuite => "full-suite",
            Experiment::Fit => "fit",
        }
    }

    /// The experiments a full suite runs.
    pub const SUITE: [Experiment; 6] = [
        Experiment::Spectrum,
        Experiment::LinearDecay,
        Experiment::Projection,
        Experiment::NonlinearRun,
        Experiment::Modulate,
        Experiment::MainTheorem,
    ];
}

/// Initial data relative to `ψ¹`, described by free data at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataSpec {
    /// `v = 0`, the ODE blow-up solution itself.
    Zero,
    /// `ψ¹` plus a Gaussian bump of the given amplitude.
    Bump(f64),
    /// The exact solution `ψ^{T'}`.
    Family(f64),
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSpec::Zero => write!(f, "zero"),
            DataSpec::Bump(a) => write!(f, "bump:{a:e}"),
            DataSpec::Family(t) => write!(f, "family:{t}"),
        }
    }
}

impl FromStr for DataSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let number = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number `{v}` in data `{s}`"));
        match s.split_once(':') {
            None if s == "zero" => Ok(DataSpec::Zero),
            Some(("bump", v)) => Ok(DataSpec::Bump(number(v)?)),
            Some(("family", v)) => Ok(DataSpec::Family(number(v)?)),
            _ => Err(format!("data must be `zero`, `bump:AMPLITUDE` or `family:T`, got `{s}`")),
        }
    }
}

impl Serialize for DataSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Parser)]
#[command(name = "blowup-lab", version, about = "Reproducible experiments on self-similar wave blow-up")]
pub struct Cli {
    pub experiment: Experiment,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "tau-end")]
    pub tau_end: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `zero`, `bump:AMPLITUDE` or `family:T`.
    #[arg(long)]
    pub data: Option<String>,
    /// Random states drawn by the linear experiments.
    #[arg(long)]
    pub samples: Option<usize>,
    /// CSV series read by `fit`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Column of the series fitted by `fit`.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long = "tau-lo")]
    pub tau_lo: Option<f64>,
    #[arg(long = "tau-hi")]
    pub tau_hi: Option<f64>,
}

/// Every setting is optional until defaults are filled in.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub p: Option<f64>,
    pub eps: Option<f64>,
    pub grid_n: Option<usize>,
    pub dt: Option<f64>,
    pub tau_end: Option<f64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub data: Option<DataSpec>,
    pub samples: Option<usize>,
    pub input: Option<PathBuf>,
    pub column: Option<String>,
    pub tau_lo: Option<f64>,
    pub tau_hi: Option<f64>,
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn merge(self, other: Overrides) -> Overrides {
        Overrides {
            p: other.p.or(self.p),
            eps: other.eps.or(self.eps),
            grid_n: other.grid_n.or(self.grid_n),
            dt: other.dt.or(self.dt),
            tau_end: other.tau_end.or(self.tau_end),
            seed: other.seed.or(self.seed),
            output_path: other.output_path.or(self.output_path),
            data: other.data.or(self.data),
            samples: other.samples.or(self.samples),
            input: other.input.or(self.input),
            column: other.column.or(self.column),
            tau_lo: other.tau_lo.or(self.tau_lo),
            tau_hi: other.tau_hi.or(self.tau_hi),
        }
    }

    pub fn from_cli(cli: &Cli) -> Result<Overrides, LabError> {
        Ok(Overrides {
            p: cli.p,
            eps: cli.eps,
            grid_n: cli.grid_n,
            dt: cli.dt,
            tau_end: cli.tau_end,
            seed: cli.seed,
            output_path: cli.out.clone(),
            data: cli.data.as_deref().map(str::parse).transpose().map_err(LabError::Usage)?,
            samples: cli.samples,
            input: cli.input.clone(),
            column: cli.column.clone(),
            tau_lo: cli.tau_lo,
            tau_hi: cli.tau_hi,
        })
    }

    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped and keys may use `-` or `_`.
    pub fn parse_file_contents(text: &str) -> Result<Overrides, LabError> {
        let mut o = Overrides::default();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = index + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LabError::Usage(format!("config line {lineno}: expected `key = value`")))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let bad = |what: &str| LabError::Usage(format!("config line {lineno}: `{value}` is not {what}"));
            let real = || value.parse::<f64>().map_err(|_| bad("a number"));
            let count = || value.parse::<usize>().map_err(|_| bad("a count"));
            match key.as_str() {
                "p" => o.p = Some(real()?),
                "eps" => o.eps = Some(real()?),
                "grid_n" => o.grid_n = Some(count()?),
                "dt" => o.dt = Some(real()?),
                "tau_end" => o.tau_end = Some(real()?),
                "seed" => o.seed = Some(value.parse().map_err(|_| bad("an integer"))?),
                "out" | "output_path" => o.output_path = Some(PathBuf::from(value)),
                "data" => o.data = Some(value.parse().map_err(LabError::Usage)?),
                "samples" => o.samples = Some(count()?),
                "input" => o.input = Some(PathBuf::from(value)),
                "column" => o.column = Some(value.to_string()),
                "tau_lo" => o.tau_lo = Some(real()?),
                "tau_hi" => o.tau_hi = Some(real()?),
                _ => return Err(LabError::Usage(format!("config line {lineno}: unknown key `{key}`"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Overrides, LabError> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.to_path_buf(), source })?;
        Self::parse_file_contents(&text)
    }
}

/// Fully resolved and validated settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub p: f64,
    pub eps: f64,
    pub grid_n: usize,
    pub dt: f64,
    pub tau_end: f64,
    pub seed: u64,
    pub output_path: PathBuf,
    /// `None` selects the experiment's own default data.
    pub data: Option<DataSpec>,
    pub samples: usize,
    pub input: Option<PathBuf>,
    pub column: String,
    pub tau_lo: f64,
    pub tau_hi: f64,
}

pub const DEFAULT_P: f64 = 5.0;
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_GRID_N: usize = 64;
pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_TAU_END: f64 = 8.0;
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: usize = 50;

impl RunConfig {
    pub fn resolve(experiment: Experiment, o: Overrides) -> Result<RunConfig, LabError> {
        let tau_end = o.tau_end.unwrap_or(DEFAULT_TAU_END);
        let config = RunConfig {
            experiment,
            p: o.p.unwrap_or(DEFAULT_P),
            eps: o.eps.unwrap_or(DEFAULT_EPS),
            grid_n: o.grid_n.unwrap_or(DEFAULT_GRID_N),
            dt: o.dt.unwrap_or(DEFAULT_DT),
            tau_end,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            output_path: o.output_path.unwrap_or_else(|| PathBuf::from("results")),
            data: o.data,
            samples: o.samples.unwrap_or(DEFAULT_SAMPLES),
            input: o.input,
            column: o.column.unwrap_or_else(|| "norm".to_string()),
            tau_lo: o.tau_lo.unwrap_or(1.0),
            tau_hi: o.tau_hi.unwrap_or(tau_end.min(5.0)),
        };
        config.validate()?;
        Ok(config)
    }

    /// Defaults, then the `--config` file, then the flags.
    pub fn from_cli(cli: &Cli) -> Result<RunConfig, LabError> {
        let file = match &cli.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        Self::resolve(cli.experiment, file.merge(Overrides::from_cli(cli)?))
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let usage = |m: String| Err(LabError::Usage(m));
        if !(self.p > 3.0 && self.p.is_finite()) {
            return usage(format!("p must be a finite number above 3, got {}", self.p));
        }
        let free = 2.0 / (self.p - 1.0);
        if !(self.eps > 0.0 && self.eps < free) {
            return usage(format!("eps must lie in (0, {free}) for p = {}, got {}", self.p, self.eps));
        }
        if !(8..=256).contains(&self.grid_n) {
            return usage(format!("grid-n must lie in [8, 256], got {}", self.grid_n));
        }
        if !(self.dt > 0.0 && self.dt <= 0.01) {
            return usage(format!("dt must lie in (0, 0.01], got {}", self.dt));
        }
        if !(self.tau_end > 0.0 && self.tau_end <= 40.0) {
            return usage(format!("tau-end must lie in (0, 40], got {}", self.tau_end));
        }
        if self.samples == 0 {
            return usage("samples must be positive".to_string());
        }
        let fits = matches!(
            self.experiment,
            Experiment::Fit | Experiment::LinearDecay | Experiment::Projection | Experiment::FullSuite
        );
        if fits && !(self.tau_lo.is_finite() && self.tau_hi.is_finite() && self.tau_lo < self.tau_hi) {
            return usage(format!("fit window needs tau-lo < tau-hi, got [{}, {}]", self.tau_lo, self.tau_hi));
        }
        match self.data {
            Some(DataSpec::Bump(a)) if !(a.is_finite() && a.abs() <= 1.0) => {
                return usage(format!("bump amplitude must be at most 1 in size, got {a}"))
            }
            Some(DataSpec::Family(t)) if !(t > 0.5 && t < 1.5) => {
                return usage(format!("family blow-up time must lie in (0.5, 1.5), got {t}"))
            }
            _ => {}
        }
        if self.experiment == Experiment::Fit && self.input.is_none() {
            return usage("fit needs --input with a CSV series".to_string());
        }
        Ok(())
    }

    /// The same configuration for another experiment writing below `dir`.
    pub fn for_experiment(&self, experiment: Experiment, dir: PathBuf) -> RunConfig {
        RunConfig { experiment, output_path: dir, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, LabError> {
        let mut full = vec!["blowup-lab"];
        full.extend_from_slice(args);
        RunConfig::from_cli(&Cli::try_parse_from(full).expect("clap"))
    }

    #[test]
    fn defaults() {
        let c = parse(&["spectrum"]).unwrap();
        assert_eq!((c.p, c.eps, c.grid_n, c.dt, c.tau_end, c.seed), (5.0, 0.1, 64, 1e-4, 8.0, 7));
        assert_eq!((c.tau_lo, c.tau_hi), (1.0, 5.0));
        assert_eq!(c.output_path, PathBuf::from("results"));
    }

    #[test]
    fn fit_window_default_follows_tau_end() {
        let c = parse(&["spectrum", "--tau-end", "3"]).unwrap();
        assert_eq!(c.tau_hi, 3.0);
    }

    #[test]
    fn file_then_flags() {
        let file = Overrides::parse_file_contents("# sweep\np = 7\ngrid-n = 24 # small\ndata = bump:1e-3\n\nseed=3").unwrap();
        let flags = Overrides { seed: Some(11), ..Default::default() };
        let c = RunConfig::resolve(Experiment::Modulate, file.merge(flags)).unwrap();
        assert_eq!((c.p, c.grid_n, c.seed), (7.0, 24, 11));
        assert_eq!(c.data, Some(DataSpec::Bump(1e-3)));
    }

    #[test]
    fn bad_file_lines_are_usage_errors() {
        for text in ["p 5", "colour = red", "grid_n = -3", "data = wave"] {
            assert!(matches!(Overrides::parse_file_contents(text), Err(LabError::Usage(_))), "{text}");
        }
    }

    #[test]
    fn invalid_values_are_rejected() {
        for args in [
            &["spectrum", "--p", "3"][..],
            &["spectrum", "--eps", "0.5"],
            &["spectrum", "--grid-n", "4"],
            &["spectrum", "--dt", "0"],
            &["spectrum", "--tau-end=-1"],
            &["spectrum", "--data", "family:2"],
            &["linear-decay", "--tau-lo", "4", "--tau-hi", "2"],
            &["fit"],
        ] {
            assert!(matches!(parse(args), Err(LabError::Usage(_))), "{args:?}");
        }
    }

    #[test]
    fn unknown_experiment_is_a_clap_error() {
        let err = Cli::try_parse_from(["blowup-lab", "levitate"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn data_spec_round_trips() {
        for s in ["zero", "bump:1e-3", "family:1.02"] {
            let d: DataSpec = s.parse().unwrap();
            assert_eq!(d.to_string().parse::<DataSpec>().unwrap(), d);
        }
    }
}
