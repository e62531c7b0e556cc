//! Region entropies and mutual information of a Gaussian fermionic state.
//!
//! The restricted two-point function `P_V (1 + Σ)/2 P_V` has eigenvalues `λ ∈ [0, 1]`;
//! the region entropy is the sum of binary entropies `h(λ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::linalg::{self, c64};
use crate::quasifree::QuasifreeSymbol;

/// Eigenvalues may leave `[0, 1]` by this much before it counts as an error.
pub const CLAMP_TOL: f64 = 1e-10;
/// Relative resolution of `S(A) + S(B) − S(A∪B)` in double precision.
pub const RESOLUTION: f64 = 1e-11;

/// `−λ ln λ − (1−λ) ln(1−λ)` with `0 ln 0 = 0`.
pub fn binary_entropy(lambda: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(lambda) + term(1.0 - lambda)
}

/// Von Neumann entropy (nats) of the state restricted to `region`.
pub fn region_entropy(sym: &QuasifreeSymbol, region: &Region, spinor_size: usize) -> Result<f64> {
    if region.is_empty() {
        return Ok(0.0);
    }
    let idx = region.indices(spinor_size);
    let block = linalg::select(&sym.sigma, &idx, &idx);
    let mut two_point = linalg::scale(&block, c64::new(0.5, 0.0));
    for k in 0..idx.len() {
        two_point[(k, k)] += c64::new(0.5, 0.0);
    }
    let mut total = 0.0;
    for lambda in linalg::eigenvalues_hermitian(&two_point)? {
        if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&lambda) {
            return Err(Error::EigenvalueOutOfRange(lambda));
        }
        total += binary_entropy(lambda.clamp(0.0, 1.0));
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// `S(A) + S(B) − S(A∪B)`, set to zero when below the resolution floor.
    pub mutual_information: f64,
    /// The unclamped difference.
    pub raw_mutual_information: f64,
    /// `RESOLUTION · max(1, S(A) + S(B))`.
    pub floor: f64,
    pub resolved: bool,
}

pub fn mutual_information(sym: &QuasifreeSymbol, a: &Region, b: &Region, spinor_size: usize) -> Result<EntropyReport> {
    if !a.is_disjoint(b) {
        return Err(Error::RegionOverlap);
    }
    let s_a = region_entropy(sym, a, spinor_size)?;
    let s_b = region_entropy(sym, b, spinor_size)?;
    let s_ab = region_entropy(sym, &a.union(b), spinor_size)?;
    let raw = s_a + s_b - s_ab;
    let floor = RESOLUTION * (s_a + s_b).max(1.0);
    let resolved = raw > floor;
    Ok(EntropyReport {
        s_a,
        s_b,
        s_ab,
        mutual_information: if resolved { raw } else { 0.0 },
        raw_mutual_information: raw,
        floor,
        resolved,
    })
}
