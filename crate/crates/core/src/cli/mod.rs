//! Config-driven experiment runner behind the `dirac-entanglement` binary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure, 1 for I/O.

pub mod config;
pub mod output;
pub mod scan;

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::clifford::{gamma_table_row, GammaTableRow};
use crate::error::Error;
use config::{ConfigIssue, ExperimentConfig};

pub use config::Observable;
pub use scan::{run_scan, ScanReport};

/// Environment variable naming the worker thread count for scans.
pub const THREADS_ENV: &str = "DIRAC_ENTANGLEMENT_THREADS";
/// Largest spacetime dimension the gamma table accepts.
pub const MAX_TABLE_DIMENSION: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Config(Vec<ConfigIssue>),
    /// `d = None` when the failure precedes the per-separation work.
    Numerical {
        d: Option<f64>,
        source: Error,
    },
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } => 3,
            RunError::Io(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(issues) => {
                write!(f, "invalid configuration")?;
                for i in issues {
                    write!(f, "\n  {i}")?;
                }
                Ok(())
            }
            RunError::Numerical { d: Some(d), source } => write!(f, "numerical failure at d = {d}: {source}"),
            RunError::Numerical { d: None, source } => {
                write!(f, "numerical failure before the scan (affects every d): {source}")
            }
            RunError::Io(msg) => write!(f, "i/o failure: {msg}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigIssue> for RunError {
    fn from(issue: ConfigIssue) -> Self {
        RunError::Config(vec![issue])
    }
}

/// Preflight quantities printed by `validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preflight {
    pub operator_size: usize,
    pub sites: usize,
    pub effective_mass: f64,
    pub predicted_rate: f64,
    pub separations: usize,
}

impl fmt::Display for Preflight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "config ok")?;
        writeln!(f, "sites = {}", self.sites)?;
        writeln!(f, "matrix_size = {}", self.operator_size)?;
        writeln!(f, "separations = {}", self.separations)?;
        writeln!(f, "M = {}", self.effective_mass)?;
        write!(f, "predicted_rate = {}", self.predicted_rate)
    }
}

/// Full validation without building any operator.
pub fn validate(config: &ExperimentConfig) -> Result<Preflight, RunError> {
    let issues = config.issues();
    if !issues.is_empty() {
        return Err(RunError::Config(issues));
    }
    let geom = config.geometry().map_err(|source| RunError::Numerical { d: None, source })?;
    let effective_mass = geom.effective_mass().map_err(|source| RunError::Numerical { d: None, source })?;
    Ok(Preflight {
        operator_size: config.operator_size().expect("validated size"),
        sites: geom.num_sites(),
        effective_mass,
        predicted_rate: effective_mass / 2.0,
        separations: config.regions.separations.len(),
    })
}

pub fn validate_path(path: &Path) -> Result<Preflight, RunError> {
    validate(&ExperimentConfig::load(path)?)
}

/// Loads, scans and writes outputs into `out` (or the configured directory).
pub fn run_path(path: &Path, out: Option<&Path>) -> Result<ScanReport, RunError> {
    let config = ExperimentConfig::load(path)?;
    let report = with_thread_pool(|| run_scan(&config))?;
    let dir = out.unwrap_or(&config.output.directory);
    output::write_outputs(&report, &config, dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    Ok(report)
}

/// Runs `f` on a pool sized by the thread environment variable, or the global pool when unset.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> Result<T, RunError> + Send) -> Result<T, RunError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return f();
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        RunError::Config(vec![ConfigIssue {
            field: THREADS_ENV.into(),
            message: format!("expected a thread count, got {value:?}"),
        }])
    })?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| RunError::Io(e.to_string()))?;
    pool.install(f)
}

/// Parses a comma-separated dimension list such as `3,4,8-12`.
pub fn parse_dims(list: &str) -> Result<Vec<usize>, RunError> {
    let bad = |msg: String| RunError::Config(vec![ConfigIssue { field: "--dims".into(), message: msg }]);
    let mut dims = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("not a dimension: {s:?}")));
        match part.split_once('-') {
            Some((lo, hi)) => dims.extend(parse(lo)?..=parse(hi)?),
            None => dims.push(parse(part)?),
        }
    }
    if dims.is_empty() {
        return Err(bad("dimension list is empty".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| !(2..=MAX_TABLE_DIMENSION).contains(&d)) {
        return Err(bad(format!("dimension {d} outside [2, {MAX_TABLE_DIMENSION}]")));
    }
    Ok(dims)
}

pub fn gamma_table(dims: &[usize]) -> Result<Vec<GammaTableRow>, RunError> {
    dims.iter().map(|&d| gamma_table_row(d).map_err(|source| RunError::Numerical { d: None, source })).collect()
}

/// Aligned text table with columns `D n eps T T^2`.
pub fn render_gamma_table(rows: &[GammaTableRow]) -> String {
    let sign = |s: Option<i8>| s.map_or("-".to_string(), |v| format!("{v:+}"));
    let mut out = format!("{:>3} {:>5} {:>4} {:>6} {:>4}\n", "D", "n", "eps", "T", "T^2");
    for r in rows {
        out.push_str(&format!(
            "{:>3} {:>5} {:>4} {:>6} {:>4}\n",
            r.dimension,
            r.spinor_size,
            sign(r.epsilon),
            if r.time_reversal_exists { "yes" } else { "no" },
            sign(r.t_squared)
        ));
    }
    out
}

pub fn version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}
