//! Restricted one-particle modular data `M_V = (P_V − Σ_V)/(P_V + Σ_V)`.
//!
//! `M_V` is diagonal in the eigenbasis of `Σ_V` on `ran(P_V)`, with eigenvalue
//! `μ(s) = (1 − s)/(1 + s)` on an eigenvector with eigenvalue `s`. Eigenvalues with
//! `1 + s ≤ KERNEL_TOL` belong to the kernel of `P_V + Σ_V`; they are excluded and every
//! power of `M_V` vanishes on them (`0^a = 0`).

use faer::Mat;
use serde::Serialize;

use crate::clifford::Antiunitary;
use crate::error::{Error, Result};
use crate::lattice::{torus_distance, Region, TorusGeometry};
use crate::linalg::{self, c64, CMat, HermitianEigen, I};
use crate::quasifree::{QuasifreeSymbol, RestrictedSymbol};

pub const KERNEL_TOL: f64 = 1e-10;
/// Tolerance for `Γk = k` and for dropping null vectors from a Γ-real basis.
pub const REALITY_TOL: f64 = 1e-10;

/// `(1 − s)/(1 + s)`.
pub fn modular_eigenvalue(s: f64) -> f64 {
    (1.0 - s) / (1.0 + s)
}

#[derive(Debug, Clone)]
pub struct ModularData {
    /// Retained eigenvalues of `Σ_V`, ascending.
    pub s: Vec<f64>,
    /// `μ_i = (1 − s_i)/(1 + s_i)`, descending.
    pub mu: Vec<f64>,
    /// Eigenvectors for `s`, as columns in `ran(P_V)` block coordinates.
    pub vectors: CMat,
    /// Number of eigenvalues dropped into the kernel.
    pub kernel_count: usize,
    /// Field indices spanned by `ran(P_V)`.
    pub indices: Vec<usize>,
}

/// `max_i |s_i + s_{rev(i)}|` for an ascending spectrum; zero iff it is symmetric under `s ↦ −s`.
pub fn spectral_asymmetry(ascending: &[f64]) -> f64 {
    ascending.iter().zip(ascending.iter().rev()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max)
}

/// `x^a` with `x ≤ KERNEL_TOL` mapped to zero.
fn clamped_power(x: f64, a: f64) -> f64 {
    if x <= KERNEL_TOL {
        0.0
    } else {
        x.powf(a)
    }
}

pub fn modular_data(rsym: &RestrictedSymbol) -> Result<ModularData> {
    let indices = rsym.projector.indices();
    let eig = HermitianEigen::new(&rsym.block())?;
    let keep: Vec<usize> = (0..eig.dim()).filter(|&i| 1.0 + eig.values[i] > KERNEL_TOL).collect();
    let s: Vec<f64> = keep.iter().map(|&i| eig.values[i].min(1.0)).collect();
    let mu = s.iter().map(|&x| modular_eigenvalue(x)).collect();
    let vectors = Mat::from_fn(eig.dim(), keep.len(), |r, c| eig.vectors[(r, keep[c])]);
    Ok(ModularData { s, mu, vectors, kernel_count: eig.dim() - keep.len(), indices })
}

/// Orthonormal basis of `{k ∈ K(V) : Γk = k}` as columns on the full space.
///
/// Starts from `(e_j + Γe_j)/√2` and `(ie_j + Γ(ie_j))/√2` for the unit vectors of `ran(P_V)` and
/// orthonormalizes in the real inner product `Re⟨u, v⟩`; for Γ-real vectors that inner product is
/// already real, so the result is also orthonormal over ℂ.
pub fn gamma_real_basis(gamma: &Antiunitary, region_indices: &[usize]) -> CMat {
    let dim = gamma.dim();
    let w = gamma.linear();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis: Vec<Vec<c64>> = Vec::new();
    for &j in region_indices {
        for phase in [linalg::ONE, I] {
            // Γ(φ e_j) = conj(φ) W e_j.
            let mut v: Vec<c64> = (0..dim).map(|r| w[(r, j)] * phase.conj() * inv_sqrt2).collect();
            v[j] += phase * inv_sqrt2;
            for _ in 0..2 {
                for b in &basis {
                    let overlap: f64 = b.iter().zip(&v).map(|(x, y)| (x.conj() * y).re).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= *bi * overlap;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > REALITY_TOL {
                basis.push(v.into_iter().map(|z| z / norm).collect());
            }
        }
    }
    Mat::from_fn(dim, basis.len(), |r, c| basis[c][r])
}

/// `‖Γk − k‖`.
pub fn reality_residual(gamma: &Antiunitary, k: &CMat) -> f64 {
    linalg::distance(&gamma.apply(k), k)
}

fn require_gamma(sym: &QuasifreeSymbol) -> Result<&Antiunitary> {
    sym.gamma.as_ref().ok_or_else(|| Error::DimensionMismatch("symbol carries no Majorana conjugation".into()))
}

/// Relative gap between `⟨k,(P+Σ_V)M^{2a}k⟩` and `⟨k,(P+Σ_V)M^{1−2a}k⟩` for a Γ-real `k` supported in `V`.
pub fn verify_prop52_quadratic_form(sym: &QuasifreeSymbol, rsym: &RestrictedSymbol, k: &CMat, a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 0.5) {
        return Err(Error::InvalidExponent(a));
    }
    let gamma = require_gamma(sym)?;
    if k.ncols() != 1 || k.nrows() != sym.dim() {
        return Err(Error::DimensionMismatch(format!("vector of shape {}x{}", k.nrows(), k.ncols())));
    }
    let residual = reality_residual(gamma, k);
    if residual > REALITY_TOL {
        return Err(Error::NotGammaReal(residual));
    }
    let data = modular_data(rsym)?;
    let outside = {
        let mut inside = vec![false; k.nrows()];
        for &i in &data.indices {
            inside[i] = true;
        }
        (0..k.nrows()).filter(|&i| !inside[i]).map(|i| k[(i, 0)].norm()).fold(0.0, f64::max)
    };
    if outside > REALITY_TOL {
        return Err(Error::InvalidGeometry(format!("vector leaks {outside:e} outside the region")));
    }
    let local = Mat::from_fn(data.indices.len(), 1, |r, _| k[(data.indices[r], 0)]);
    let coeffs = data.vectors.adjoint() * &local;
    // (1+s)M^t = (1+s)^{1−t}(1−s)^t; both factors vanish within KERNEL_TOL of zero, so the
    // mirror pair s, −s is truncated symmetrically.
    let form = |t: f64| -> f64 {
        data.s
            .iter()
            .enumerate()
            .map(|(i, &s)| coeffs[(i, 0)].norm_sqr() * clamped_power(1.0 + s, 1.0 - t) * clamped_power(1.0 - s, t))
            .sum()
    };
    let first = form(2.0 * a);
    let second = form(1.0 - 2.0 * a);
    Ok((first - second).abs() / first.abs().max(1.0))
}

/// Both sides of the modular norm comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop53Report {
    /// Real-linear trace norm of `(P+Σ_{V̂})^{1/2} M^a` on the Γ-real vectors of `K(V̌)`.
    pub lhs: f64,
    /// Complex trace norm of `(P_{V̂} − Σ²_{V̂})^a` restricted to `K(V̌)`.
    pub rhs: f64,
    /// `2^{2a}`.
    pub c_a: f64,
    /// Real-versus-complex norm factor `2^{1/p}` at `p = 1`.
    pub real_factor: f64,
}

impl Prop53Report {
    pub fn holds(&self) -> bool {
        self.lhs <= self.real_factor * self.c_a * self.rhs * (1.0 + 1e-12) + 1e-14
    }
}

/// `V̌ ⊂ V̂`, and unless `V̂` is the whole torus, no site of `V̌` is adjacent to the outside of `V̂`.
pub fn check_nested(geom: &TorusGeometry, v_check: &Region, v_hat: &Region) -> Result<()> {
    if v_check.is_empty() || v_hat.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if !v_check.is_subset(v_hat) {
        return Err(Error::RegionNotNested);
    }
    let outside = v_hat.complement(geom);
    let touching = v_check
        .sites()
        .iter()
        .any(|&x| outside.sites().iter().any(|&y| torus_distance(geom, x, y) <= geom.spacing() * (1.0 + 1e-12)));
    if touching {
        return Err(Error::RegionNotNested);
    }
    Ok(())
}

pub fn prop53_norm_comparison(
    sym: &QuasifreeSymbol,
    geom: &TorusGeometry,
    v_check: &Region,
    v_hat: &Region,
    a: f64,
) -> Result<Prop53Report> {
    if !(a > 0.0 && a <= 0.25) {
        return Err(Error::InvalidExponent(a));
    }
    check_nested(geom, v_check, v_hat)?;
    let gamma = require_gamma(sym)?;
    let n = sym.dim() / geom.num_sites();
    let hat_idx = v_hat.indices(n);
    let check_idx = v_check.indices(n);
    let eig = HermitianEigen::new(&linalg::select(&sym.sigma, &hat_idx, &hat_idx))?;

    // (1+s)^{1/2} μ^a = (1+s)^{1/2−a}(1−s)^a; eigenvalues within KERNEL_TOL of ±1 are exact.
    let lhs_fn = move |s: f64| clamped_power(1.0 + s, 0.5 - a) * clamped_power(1.0 - s, a);
    let f_hat = eig.apply(lhs_fn);
    let basis = gamma_real_basis(gamma, &check_idx);
    let pos: Vec<usize> = check_idx.iter().map(|i| hat_idx.binary_search(i).expect("V̌ lies inside V̂")).collect();
    let local_basis = Mat::from_fn(hat_idx.len(), basis.ncols(), |r, c| basis[(hat_idx[r], c)]);
    let image = &f_hat * &local_basis;
    let stacked = Mat::from_fn(2 * image.nrows(), image.ncols(), |r, c| {
        let z = image[(r % image.nrows(), c)];
        if r < image.nrows() {
            z.re
        } else {
            z.im
        }
    });
    let lhs = linalg::real_singular_values(&stacked)?.iter().sum();

    let rhs_block = eig.apply_to_columns(|s| clamped_power(1.0 - s * s, a), &pos);
    let rhs = linalg::trace_norm(&rhs_block)?;
    Ok(Prop53Report { lhs, rhs, c_a: 2f64.powf(2.0 * a), real_factor: 2.0 })
}
