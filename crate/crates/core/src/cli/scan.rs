//! Separation scans: one ground state, many region pairs, one fit per observable.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{BackendKind, ExperimentConfig, Observable, Placement};
use super::RunError;
use crate::bounds::{appendix_decay_norm_eig, cut_operator, fit_decay_rate, positive_eigen, FitPolicy};
use crate::clifford::build_gamma_rep;
use crate::error::Error;
use crate::gaussian_ref::mutual_information;
use crate::lattice::{
    build_cutoffs, build_dirac_spectral_capped, build_dirac_wilson_capped, build_scalar_lichnerowicz, Region,
    TorusGeometry,
};
use crate::linalg::HermitianEigen;
use crate::quasifree::{ground_symbol, QuasifreeSymbol};

/// Observables at one separation; `None` for observables not requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub d: f64,
    pub trace_norm: Option<f64>,
    pub log_trace_norm: Option<f64>,
    pub mutual_info: Option<f64>,
    /// One entry per configured appendix exponent pair.
    pub appendix: Vec<f64>,
    pub seconds: f64,
}

/// Rate fit of one CSV column.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FitEntry {
    Fitted {
        slope: f64,
        intercept: f64,
        r2: f64,
        /// Half-open row range `[start, end)` admitted by the separation cuts.
        window: [usize; 2],
        /// Rows inside the window left out as unresolved.
        excluded: Vec<usize>,
        /// `(−slope − M/2) / (M/2)`.
        relative_deviation: f64,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub setup_seconds: f64,
    pub total_seconds: f64,
    pub per_point_seconds: Vec<f64>,
}

/// Everything a scan produces before it is written out.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub effective_mass: f64,
    pub predicted_rate: f64,
    /// Keyed by CSV column name.
    pub fitted: BTreeMap<String, FitEntry>,
    pub timings: Timings,
}

impl ScanReport {
    /// Values of a named CSV column, `NaN` where not computed.
    pub fn column(&self, name: &str, config: &ExperimentConfig) -> Option<Vec<f64>> {
        let pick = |f: &dyn Fn(&ScanRow) -> Option<f64>| self.rows.iter().map(|r| f(r).unwrap_or(f64::NAN)).collect();
        match name {
            "d" => Some(self.rows.iter().map(|r| r.d).collect()),
            "trace_norm" => Some(pick(&|r| r.trace_norm)),
            "log_trace_norm" => Some(pick(&|r| r.log_trace_norm)),
            "mutual_info" => Some(pick(&|r| r.mutual_info)),
            _ => {
                let k =
                    config.run.appendix_exponents.iter().position(|&p| ExperimentConfig::appendix_column(p) == name)?;
                Some(self.rows.iter().map(|r| r.appendix[k]).collect())
            }
        }
    }
}

/// Region pair for separation `d`: `A` anchored at site 0, `B` displaced along the first axis.
pub fn place_regions(config: &ExperimentConfig, geom: &TorusGeometry, d: f64) -> crate::Result<(Region, Region)> {
    let p = geom.spatial_dim();
    let r = &config.regions;
    let extent = |size: usize| -> Vec<usize> {
        let mut e = vec![size];
        e.extend(std::iter::repeat_n(if r.placement == Placement::Box { size } else { 1 }, p - 1));
        e
    };
    let gap = (d / geom.spacing()).round() as usize;
    let mut origin_b = vec![0; p];
    origin_b[0] = r.size_a - 1 + gap;
    let a = Region::block(geom, &vec![0; p], &extent(r.size_a))?;
    let b = Region::block(geom, &origin_b, &extent(r.size_b))?;
    Ok((a, b))
}

struct Prepared {
    geom: TorusGeometry,
    spinor_size: usize,
    symbol: Option<QuasifreeSymbol>,
    scalar: Option<HermitianEigen>,
    effective_mass: f64,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared, RunError> {
    let issues = config.issues();
    if !issues.is_empty() {
        return Err(RunError::Config(issues));
    }
    let whole = |source: Error| RunError::Numerical { d: None, source };
    let geom = config.geometry().map_err(whole)?;
    let effective_mass = geom.effective_mass().map_err(whole)?;
    let rep = build_gamma_rep(config.run.gamma_dimension).map_err(whole)?;
    let obs = &config.run.observables;
    let symbol = if obs.contains(&Observable::CutNorm) || obs.contains(&Observable::MutualInfo) {
        let cap = config.run.size_cap;
        let dirac = match config.run.backend {
            BackendKind::Spectral => build_dirac_spectral_capped(&geom, &rep, cap),
            BackendKind::Wilson => build_dirac_wilson_capped(&geom, &rep, config.run.wilson_r, cap),
        }
        .map_err(whole)?;
        Some(ground_symbol(&dirac).map_err(whole)?)
    } else {
        None
    };
    let scalar = if obs.contains(&Observable::AppendixNorm) {
        let l = build_scalar_lichnerowicz(&geom).map_err(whole)?;
        Some(positive_eigen(&l).map_err(whole)?)
    } else {
        None
    };
    Ok(Prepared { spinor_size: rep.spinor_size(), geom, symbol, scalar, effective_mass })
}

fn scan_point(config: &ExperimentConfig, prep: &Prepared, d: f64) -> crate::Result<ScanRow> {
    let start = Instant::now();
    let (a, b) = place_regions(config, &prep.geom, d)?;
    let obs = &config.run.observables;
    let mut row =
        ScanRow { d, trace_norm: None, log_trace_norm: None, mutual_info: None, appendix: Vec::new(), seconds: 0.0 };
    if let (true, Some(sym)) = (obs.contains(&Observable::CutNorm), &prep.symbol) {
        let cut = cut_operator(sym, &prep.geom, &a, &b)?;
        row.trace_norm = Some(cut.trace_norm);
        row.log_trace_norm = Some(if cut.trace_norm == 0.0 { f64::NEG_INFINITY } else { cut.trace_norm.ln() });
    }
    if let (true, Some(sym)) = (obs.contains(&Observable::MutualInfo), &prep.symbol) {
        row.mutual_info = Some(mutual_information(sym, &a, &b, prep.spinor_size)?.mutual_information);
    }
    if let Some(eig) = &prep.scalar {
        let cutoffs = build_cutoffs(&prep.geom, &a, &b, config.run.epsilon)?;
        for &[ea, eb] in &config.run.appendix_exponents {
            row.appendix.push(appendix_decay_norm_eig(eig, &cutoffs, ea, eb)?);
        }
    }
    row.seconds = start.elapsed().as_secs_f64();
    Ok(row)
}

/// Runs every separation of `config` and fits a decay rate per requested observable.
///
/// Separations are evaluated in parallel; rows come back sorted by `d` and the
/// numbers do not depend on the thread count.
pub fn run_scan(config: &ExperimentConfig) -> Result<ScanReport, RunError> {
    let clock = Instant::now();
    let prep = prepare(config)?;
    let setup_seconds = clock.elapsed().as_secs_f64();

    let results: Vec<(f64, crate::Result<ScanRow>)> =
        config.regions.separations.par_iter().map(|&d| (d, scan_point(config, &prep, d))).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (d, result) in results {
        rows.push(result.map_err(|source| RunError::Numerical { d: Some(d), source })?);
    }
    rows.sort_by(|x, y| x.d.total_cmp(&y.d));

    let predicted_rate = prep.effective_mass / 2.0;
    let policy = FitPolicy::tail(prep.effective_mass, Some(config.max_separation()), config.geometry.spacing);
    let mut report = ScanReport {
        rows,
        effective_mass: prep.effective_mass,
        predicted_rate,
        fitted: BTreeMap::new(),
        timings: Timings { setup_seconds, total_seconds: 0.0, per_point_seconds: Vec::new() },
    };
    let mut columns: Vec<String> = Vec::new();
    for o in &config.run.observables {
        match o {
            Observable::CutNorm => columns.push("trace_norm".into()),
            Observable::MutualInfo => columns.push("mutual_info".into()),
            Observable::AppendixNorm => {
                columns.extend(config.run.appendix_exponents.iter().map(|&p| ExperimentConfig::appendix_column(p)))
            }
        }
    }
    for name in columns {
        let values = report.column(&name, config).expect("requested column exists");
        let points: Vec<(f64, f64)> = report.rows.iter().map(|r| r.d).zip(values).collect();
        let entry = match fit_decay_rate(&points, &policy) {
            Ok(fit) => FitEntry::Fitted {
                slope: fit.slope,
                intercept: fit.intercept,
                r2: fit.r_squared,
                window: [fit.window.start, fit.window.end],
                excluded: fit.unresolved,
                relative_deviation: (-fit.slope - predicted_rate) / predicted_rate,
            },
            Err(e) => FitEntry::Failed { error: e.to_string() },
        };
        report.fitted.insert(name, entry);
    }
    report.timings.per_point_seconds = report.rows.iter().map(|r| r.seconds).collect();
    report.timings.total_seconds = clock.elapsed().as_secs_f64();
    Ok(report)
}
