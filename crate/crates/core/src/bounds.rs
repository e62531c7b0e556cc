//! Cut-operator trace norms, appendix decay norms and exponential rate fits.
//!
//! For a pure symbol (`Σ² = 1`) the cut operator factorizes:
//! `X = P_{B'} − Σ²_{B'} = G†G` with `G = P_B Σ P_{B'}`. Writing `GG† = U s² U†`,
//! the nonzero singular values of `X^{1/4} P_A` are those of `s^{-1/2} U† Σ_{BA}`.
//! Only `|B|·n`-sized blocks are ever diagonalized, and the result is free of the
//! cancellation floor that `P_{B'} − Σ²_{B'}` carries when formed explicitly.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{region_distance, CutoffFamily, Region, TorusGeometry};
use crate::linalg::{self, CMat, HermitianEigen};
use crate::quasifree::QuasifreeSymbol;

/// Eigenvalues of `X` below `−NEGATIVE_TOL` signal numerical breakdown.
pub const NEGATIVE_TOL: f64 = 1e-9;
/// `‖Σ² − 1‖` above this rules out the factored route.
pub const PURITY_TOL: f64 = 1e-8;
/// Modes of `GG†` below this fraction of its largest eigenvalue are dropped.
const FACTOR_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CutRoute {
    /// Through `G = P_B Σ P_{B'}`; needs a pure symbol.
    #[default]
    Factored,
    /// Forms `X` on `ran(P_{B'})` and takes its fourth root; any symbol.
    Direct,
}

/// Singular values of `(P_{B'} − Σ²_{B'})^{1/4} P_A`.
#[derive(Debug, Clone, Serialize)]
pub struct CutSpectrum {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub trace_norm: f64,
    /// `dist(A, B)`; infinite when `B` is empty.
    pub d: f64,
    /// `M = √inf(m² + R/4)`.
    pub effective_mass: f64,
    /// `‖P_A X P_A − |P_B Σ P_A|²‖`.
    pub quadratic_form_residual: f64,
    pub route: CutRoute,
}

fn check_regions(a: &Region, b: &Region) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if !a.is_disjoint(b) {
        return Err(Error::RegionOverlap);
    }
    Ok(())
}

/// `P_A X P_A` computed through `B'`, against `Σ_{BA}† Σ_{BA}` computed through `B`.
fn quadratic_form_residual(sigma: &CMat, ia: &[usize], ib: &[usize], ibp: &[usize]) -> f64 {
    let s_abp = linalg::select(sigma, ia, ibp);
    let mut lhs = linalg::scale(&(&s_abp * s_abp.adjoint()), -linalg::ONE);
    for k in 0..ia.len() {
        lhs[(k, k)] += linalg::ONE;
    }
    let s_ba = linalg::select(sigma, ib, ia);
    let rhs = s_ba.adjoint() * &s_ba;
    linalg::distance(&lhs, &rhs)
}

/// Trace norm of the cut operator, by the factored route.
pub fn cut_operator(sym: &QuasifreeSymbol, geom: &TorusGeometry, a: &Region, b: &Region) -> Result<CutSpectrum> {
    cut_operator_with(sym, geom, a, b, CutRoute::Factored)
}

pub fn cut_operator_with(
    sym: &QuasifreeSymbol,
    geom: &TorusGeometry,
    a: &Region,
    b: &Region,
    route: CutRoute,
) -> Result<CutSpectrum> {
    check_regions(a, b)?;
    let sites = geom.num_sites();
    if sites == 0 || !sym.dim().is_multiple_of(sites) {
        return Err(Error::DimensionMismatch(format!("symbol of size {} on {sites} sites", sym.dim())));
    }
    let n = sym.dim() / sites;
    let sigma = &sym.sigma;
    let (ia, ib) = (a.indices(n), b.indices(n));
    let bp = b.complement(geom);
    let ibp = bp.indices(n);
    let d = if b.is_empty() { f64::INFINITY } else { region_distance(geom, a, b)? };
    let effective_mass = geom.effective_mass()?;
    let quadratic_form_residual = quadratic_form_residual(sigma, &ia, &ib, &ibp);

    let mut singular_values = match route {
        CutRoute::Factored => {
            let purity = linalg::distance(&(sigma * sigma), &linalg::identity(sym.dim()));
            if purity > PURITY_TOL {
                return Err(Error::NotPure(purity));
            }
            factored_singular_values(sigma, &ia, &ib, &ibp)?
        }
        CutRoute::Direct => direct_singular_values(sigma, &ia, &ibp, a, &bp, n)?,
    };
    singular_values.sort_by(|x, y| y.total_cmp(x));
    let trace_norm = singular_values.iter().sum();
    Ok(CutSpectrum { singular_values, trace_norm, d, effective_mass, quadratic_form_residual, route })
}

fn factored_singular_values(sigma: &CMat, ia: &[usize], ib: &[usize], ibp: &[usize]) -> Result<Vec<f64>> {
    if ib.is_empty() {
        return Ok(Vec::new());
    }
    let g = linalg::select(sigma, ib, ibp);
    let ggh = &g * g.adjoint();
    let eig = HermitianEigen::new(&ggh)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..eig.dim()).filter(|&k| eig.values[k] > FACTOR_FLOOR * top).collect();
    if keep.is_empty() {
        return Ok(Vec::new());
    }
    let s_ba = linalg::select(sigma, ib, ia);
    let projected = eig.vectors.adjoint() * &s_ba;
    let scaled = faer::Mat::from_fn(keep.len(), ia.len(), |r, c| {
        let k = keep[r];
        projected[(k, c)] * eig.values[k].powf(-0.25)
    });
    linalg::singular_values(&scaled)
}

fn direct_singular_values(
    sigma: &CMat,
    ia: &[usize],
    ibp: &[usize],
    a: &Region,
    bp: &Region,
    n: usize,
) -> Result<Vec<f64>> {
    let s = linalg::select(sigma, ibp, ibp);
    let mut x = linalg::scale(&(&s * &s), -linalg::ONE);
    for k in 0..ibp.len() {
        x[(k, k)] += linalg::ONE;
    }
    let eig = HermitianEigen::new(&x)?;
    if let Some(&low) = eig.values.first() {
        if low < -NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue(low));
        }
    }
    // Positions of A's indices inside the B' block.
    let local: Vec<usize> = a
        .sites()
        .iter()
        .flat_map(|&site| {
            let pos = bp.sites().binary_search(&site).expect("A lies inside B'");
            (0..n).map(move |s| pos * n + s)
        })
        .collect();
    debug_assert_eq!(local.len(), ia.len());
    let root = eig.apply_to_columns(|v| v.max(0.0).powf(0.25), &local);
    linalg::singular_values(&root)
}

/// Per-separation summary of the bound quantity.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub d: f64,
    pub trace_norm: f64,
    /// `ln(trace_norm)`, `−∞` for an exact zero.
    pub log_trace_norm: f64,
    pub exact_zero: bool,
    pub effective_mass: f64,
    /// `M/2`.
    pub predicted_rate: f64,
    /// The multiplicative constant of the bound is never estimated.
    pub constant_reported: bool,
    /// Norms refer to the Dirac system; its entropy is twice that of the Majorana system.
    pub doubled_system: bool,
}

pub fn ree_bound_report(cut: &CutSpectrum) -> BoundReport {
    let exact_zero = cut.trace_norm == 0.0;
    BoundReport {
        d: cut.d,
        trace_norm: cut.trace_norm,
        log_trace_norm: if exact_zero { f64::NEG_INFINITY } else { cut.trace_norm.ln() },
        exact_zero,
        effective_mass: cut.effective_mass,
        predicted_rate: cut.effective_mass / 2.0,
        constant_reported: false,
        doubled_system: true,
    }
}

/// `‖(1 − χ̂) L^a χ L^b‖` (largest singular value).
pub fn appendix_decay_norm(l: &CMat, cutoffs: &CutoffFamily, a: f64, b: f64) -> Result<f64> {
    let eig = positive_eigen(l)?;
    appendix_decay_norm_eig(&eig, cutoffs, a, b)
}

/// Eigendecomposition of `L`, rejecting a non-positive spectrum.
pub fn positive_eigen(l: &CMat) -> Result<HermitianEigen> {
    let eig = HermitianEigen::new(l)?;
    match eig.values.first() {
        Some(&low) if low <= 0.0 => Err(Error::PositivityViolation(low)),
        _ => Ok(eig),
    }
}

/// As [`appendix_decay_norm`], reusing a decomposition of `L`.
pub fn appendix_decay_norm_eig(eig: &HermitianEigen, cutoffs: &CutoffFamily, a: f64, b: f64) -> Result<f64> {
    let dim = eig.dim();
    if cutoffs.chi.len() != dim || cutoffs.chi_hat.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "cutoffs on {} sites, operator of size {dim}",
            cutoffs.chi.len()
        )));
    }
    let rows: Vec<usize> = (0..dim).filter(|&x| 1.0 - cutoffs.chi_hat[x] != 0.0).collect();
    let mids: Vec<usize> = (0..dim).filter(|&x| cutoffs.chi[x] != 0.0).collect();
    if rows.is_empty() || mids.is_empty() {
        return Ok(0.0);
    }
    let v = &eig.vectors;
    let power_block = |p: f64, r: &[usize], c: &[usize]| {
        if p == 0.0 {
            return faer::Mat::from_fn(r.len(), c.len(), |i, j| if r[i] == c[j] { linalg::ONE } else { linalg::ZERO });
        }
        let left = faer::Mat::from_fn(r.len(), dim, |i, k| v[(r[i], k)] * eig.values[k].powf(p));
        let right = faer::Mat::from_fn(dim, c.len(), |k, j| v[(c[j], k)].conj());
        &left * &right
    };
    let mut first = power_block(a, &rows, &mids);
    for (i, &x) in rows.iter().enumerate() {
        for (j, &y) in mids.iter().enumerate() {
            first[(i, j)] *= (1.0 - cutoffs.chi_hat[x]) * cutoffs.chi[y];
        }
    }
    let full = if b == 0.0 {
        first
    } else {
        let all: Vec<usize> = (0..dim).collect();
        &first * &power_block(b, &mids, &all)
    };
    linalg::operator_norm(&full)
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares; `r² = 1` when the data have no spread.
pub fn least_squares(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    LinearFit { slope, intercept, r2 }
}

/// Which points of a decay scan enter the fit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FitPolicy {
    /// Drop `d` below this (the pre-asymptotic region, `3/M` by default).
    pub min_separation: Option<f64>,
    /// Largest separation the torus admits; points within `wrap_margin` of it are dropped.
    pub max_separation: Option<f64>,
    pub wrap_margin: f64,
    /// Values at or below this are unresolved and excluded.
    pub value_floor: f64,
}

impl FitPolicy {
    /// Tail window: `d ≥ 3/M`, and at least two sites short of the wrap-around separation.
    pub fn tail(effective_mass: f64, max_separation: Option<f64>, spacing: f64) -> Self {
        Self {
            min_separation: Some(3.0 / effective_mass),
            max_separation,
            wrap_margin: 2.0 * spacing,
            value_floor: 0.0,
        }
    }
}

/// Exponential fit of a decay scan.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Index range of `points` allowed by the separation cuts.
    pub window: Range<usize>,
    /// Indices inside the window left out for being at or below the value floor.
    pub unresolved: Vec<usize>,
}

/// Fits `ln(value) = slope·d + intercept` over the policy window.
pub fn fit_decay_rate(points: &[(f64, f64)], policy: &FitPolicy) -> Result<DecayFit> {
    if points.len() < 4 {
        return Err(Error::InsufficientPoints { needed: 4, got: points.len() });
    }
    if points.windows(2).any(|w| w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::UnsortedSeparations);
    }
    if points.iter().all(|p| p.1 == 0.0) {
        return Err(Error::AllZeroValues);
    }
    let allowed = |d: f64| {
        policy.min_separation.is_none_or(|lo| d >= lo)
            && policy.max_separation.is_none_or(|hi| d <= hi - policy.wrap_margin)
    };
    let start = points.iter().position(|p| allowed(p.0)).unwrap_or(points.len());
    let end = points.iter().rposition(|p| allowed(p.0)).map_or(start, |i| i + 1);
    let window = start..end.max(start);
    let floor = policy.value_floor.max(0.0);
    let mut unresolved = Vec::new();
    let mut used = Vec::new();
    for i in window.clone() {
        let (d, v) = points[i];
        if v > floor && v.is_finite() {
            used.push((d, v.ln()));
        } else {
            unresolved.push(i);
        }
    }
    if used.len() < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: used.len() });
    }
    let fit = least_squares(&used);
    Ok(DecayFit {
        points: points.to_vec(),
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r2,
        window,
        unresolved,
    })
}
