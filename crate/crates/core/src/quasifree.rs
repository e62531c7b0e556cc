//! One-particle symbols of quasifree states.
//!
//! A symbol is a self-adjoint `Σ` with `−1 ≤ Σ ≤ 1`; the two-point projector is `(1 + Σ)/2`.
//! Majorana conjugation is carried as the antiunitary `k ↦ (1 ⊗ 𝔠⁻¹) conj(k)` on lattice fields.

use std::io::{Read, Write};

use serde::Serialize;

use crate::clifford::{build_gamma_rep, solve_charge_conjugation, Antiunitary};
use crate::error::{Error, Result};
use crate::lattice::{Backend, DiracOperator, RegionProjector};
use crate::linalg::{self, c64, CMat, HermitianEigen, ONE};

/// Eigenvalues with `|λ| ≤` this are treated as a closed gap.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolSource {
    Ground,
    Custom,
}

/// Provenance recorded in symbol dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SymbolMeta {
    /// 0 spectral, 1 Wilson, 2 custom.
    pub backend: u64,
    pub dimension: u64,
    pub sites_per_dim: u64,
    pub spatial_dim: u64,
}

#[derive(Debug, Clone)]
pub struct QuasifreeSymbol {
    pub sigma: CMat,
    pub source: SymbolSource,
    /// Majorana conjugation on the full field space, when the representation admits one.
    pub gamma: Option<Antiunitary>,
    pub meta: SymbolMeta,
}

impl QuasifreeSymbol {
    /// Wraps an arbitrary matrix; relations are checked by [`verify_majorana_relations`], not here.
    pub fn custom(sigma: CMat, gamma: Option<Antiunitary>) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() {
            return Err(Error::DimensionMismatch(format!("symbol is {}x{}", sigma.nrows(), sigma.ncols())));
        }
        if let Some(g) = &gamma {
            if g.dim() != sigma.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "Majorana conjugation acts on dimension {}, symbol has {}",
                    g.dim(),
                    sigma.nrows()
                )));
            }
        }
        let meta = SymbolMeta { backend: 2, ..SymbolMeta::default() };
        Ok(Self { sigma, source: SymbolSource::Custom, gamma, meta })
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }
}

/// `sign(H) = V sign(Λ) V†`; fails if any eigenvalue lies within `gap_tol` of zero.
pub fn matrix_sign(h: &CMat, gap_tol: f64) -> Result<CMat> {
    let eig = HermitianEigen::new(h)?;
    let smallest = eig.values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    if smallest <= gap_tol {
        return Err(Error::GaplessSpectrum(smallest));
    }
    Ok(eig.apply(f64::signum))
}

/// Lattice Majorana conjugation for a Dirac operator, if its representation has one.
pub fn lattice_majorana(dirac: &DiracOperator) -> Option<Antiunitary> {
    let rep = build_gamma_rep(dirac.dimension).ok()?;
    let iset = solve_charge_conjugation(&rep).ok()?;
    Some(iset.majorana().sitewise(dirac.geometry.num_sites()))
}

/// Ground-state symbol `Σ₀ = H/|H|` with the default gap tolerance.
pub fn ground_symbol(dirac: &DiracOperator) -> Result<QuasifreeSymbol> {
    ground_symbol_with_tol(dirac, DEFAULT_GAP_TOL)
}

pub fn ground_symbol_with_tol(dirac: &DiracOperator, gap_tol: f64) -> Result<QuasifreeSymbol> {
    let sigma = matrix_sign(&dirac.h, gap_tol)?;
    let backend = match dirac.backend {
        Backend::Spectral => 0,
        Backend::Wilson { .. } => 1,
    };
    let geom = &dirac.geometry;
    Ok(QuasifreeSymbol {
        sigma,
        source: SymbolSource::Ground,
        gamma: lattice_majorana(dirac),
        meta: SymbolMeta {
            backend,
            dimension: dirac.dimension as u64,
            sites_per_dim: geom.sites_per_dim() as u64,
            spatial_dim: geom.spatial_dim() as u64,
        },
    })
}

/// `Σ_V = P_V Σ P_V` on the full space.
#[derive(Debug, Clone)]
pub struct RestrictedSymbol {
    pub sigma_v: CMat,
    pub projector: RegionProjector,
}

impl RestrictedSymbol {
    /// Block of `Σ_V` on `ran(P_V)`.
    pub fn block(&self) -> CMat {
        let idx = self.projector.indices();
        linalg::select(&self.sigma_v, &idx, &idx)
    }

    /// Eigenvalues of `Σ_V` on `ran(P_V)`, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigenvalues_hermitian(&self.block())
    }
}

pub fn restrict_symbol(sym: &QuasifreeSymbol, projector: &RegionProjector) -> RestrictedSymbol {
    RestrictedSymbol { sigma_v: projector.compress(&sym.sigma), projector: projector.clone() }
}

/// Residuals of the defining relations of a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajoranaReport {
    /// `‖Σ − Σ†‖`.
    pub self_adjoint: f64,
    /// `max(0, max|λ(Σ)| − 1)`.
    pub spectrum: f64,
    /// `‖ΓΣΓ + Σ‖`; `None` without a Majorana conjugation.
    pub majorana: Option<f64>,
    /// `‖Σ² − 1‖`; zero iff the state is pure.
    pub purity: f64,
}

impl MajoranaReport {
    pub fn max_residual(&self) -> f64 {
        self.self_adjoint.max(self.spectrum).max(self.majorana.unwrap_or(0.0))
    }
}

pub fn verify_majorana_relations(sym: &QuasifreeSymbol) -> Result<MajoranaReport> {
    let s = &sym.sigma;
    let n = s.nrows();
    let spectrum = linalg::eigenvalues_hermitian(s)?.into_iter().map(|x| (x.abs() - 1.0).max(0.0)).fold(0.0, f64::max);
    let majorana = sym.gamma.as_ref().map(|g| linalg::max_abs(&(&g.conjugate_operator(s) + s)));
    Ok(MajoranaReport {
        self_adjoint: linalg::hermitian_residual(s),
        spectrum,
        majorana,
        purity: linalg::distance(&(s * s), &linalg::identity(n)),
    })
}

const MAGIC: [u8; 8] = *b"QFSYMB01";
const DUMP_VERSION: u64 = 1;

/// Header of a binary symbol dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DumpHeader {
    pub version: u64,
    pub rows: u64,
    pub cols: u64,
    pub meta: SymbolMeta,
}

/// Writes eight little-endian `u64` header fields (magic, version, rows, cols, backend, D, N, p)
/// followed by the matrix in row-major order as `(re, im)` `f64` pairs.
pub fn write_symbol_dump<W: Write>(mut out: W, sym: &QuasifreeSymbol) -> Result<()> {
    let s = &sym.sigma;
    let header = [
        u64::from_le_bytes(MAGIC),
        DUMP_VERSION,
        s.nrows() as u64,
        s.ncols() as u64,
        sym.meta.backend,
        sym.meta.dimension,
        sym.meta.sites_per_dim,
        sym.meta.spatial_dim,
    ];
    let mut buf = Vec::with_capacity(64 + 16 * s.nrows() * s.ncols());
    for field in header {
        buf.extend_from_slice(&field.to_le_bytes());
    }
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            buf.extend_from_slice(&s[(i, j)].re.to_le_bytes());
            buf.extend_from_slice(&s[(i, j)].im.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_symbol_dump<R: Read>(mut input: R) -> Result<(DumpHeader, CMat)> {
    let mut raw = [0u8; 64];
    input.read_exact(&mut raw).map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    let field = |k: usize| u64::from_le_bytes(raw[8 * k..8 * k + 8].try_into().expect("8-byte slice"));
    if raw[..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = field(1);
    if version != DUMP_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let (rows, cols) = (field(2), field(3));
    let count = rows
        .checked_mul(cols)
        .and_then(|c| c.checked_mul(16))
        .filter(|&c| c <= isize::MAX as u64)
        .ok_or_else(|| Error::Format(format!("implausible shape {rows}x{cols}")))?;
    let mut data = Vec::new();
    input.take(count).read_to_end(&mut data)?;
    if data.len() as u64 != count {
        return Err(Error::Format(format!("expected {count} data bytes, found {}", data.len())));
    }
    let value = |k: usize| f64::from_le_bytes(data[8 * k..8 * k + 8].try_into().expect("8-byte slice"));
    let (r, c) = (rows as usize, cols as usize);
    let m = faer::Mat::from_fn(r, c, |i, j| {
        let k = 2 * (i * c + j);
        c64::new(value(k), value(k + 1))
    });
    let meta = SymbolMeta { backend: field(4), dimension: field(5), sites_per_dim: field(6), spatial_dim: field(7) };
    Ok((DumpHeader { version, rows, cols, meta }, m))
}

/// `−Σ` for a symbol, keeping its Majorana conjugation.
pub fn negate(sym: &QuasifreeSymbol) -> QuasifreeSymbol {
    QuasifreeSymbol { sigma: linalg::scale(&sym.sigma, -ONE), ..sym.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_rep;
    use crate::lattice::{build_dirac_spectral, build_dirac_wilson, region_projector, Region, TorusGeometry};

    fn chain_symbol(n: usize, m: f64) -> (TorusGeometry, QuasifreeSymbol) {
        let geom = TorusGeometry::new(1, n, 1.0, m).unwrap();
        let dirac = build_dirac_spectral(&geom, &build_gamma_rep(4).unwrap()).unwrap();
        (geom, ground_symbol(&dirac).unwrap())
    }

    #[test]
    fn single_block_sign_is_gamma0() {
        let rep = build_gamma_rep(4).unwrap();
        let h = linalg::scale(rep.gamma(0), c64::new(0.8, 0.0));
        assert!(linalg::distance(&matrix_sign(&h, 1e-8).unwrap(), rep.gamma(0)) < 1e-14);
    }

    #[test]
    fn ground_symbol_relations() {
        let (_, sym) = chain_symbol(16, 0.5);
        let report = verify_majorana_relations(&sym).unwrap();
        assert!(report.max_residual() < 1e-10, "{report:?}");
        assert!(report.purity < 1e-10);
        assert_eq!(sym.source, SymbolSource::Ground);
    }

    #[test]
    fn tracial_symbol_has_no_residuals() {
        let (_, ground) = chain_symbol(4, 1.0);
        let zero = QuasifreeSymbol::custom(linalg::zeros(16, 16), ground.gamma.clone()).unwrap();
        let report = verify_majorana_relations(&zero).unwrap();
        assert_eq!(report.max_residual(), 0.0);
        assert!((report.purity - 1.0).abs() < 1e-15);
    }

    #[test]
    fn majorana_violation_is_detected() {
        let (_, ground) = chain_symbol(4, 1.0);
        let bad = QuasifreeSymbol::custom(linalg::identity(16), ground.gamma.clone()).unwrap();
        assert!(verify_majorana_relations(&bad).unwrap().majorana.unwrap() > 0.5);
    }

    #[test]
    fn sign_equivariance() {
        let geom = TorusGeometry::new(1, 16, 1.0, 0.5).unwrap();
        let dirac = build_dirac_spectral(&geom, &build_gamma_rep(4).unwrap()).unwrap();
        let plus = matrix_sign(&dirac.h, DEFAULT_GAP_TOL).unwrap();
        let minus = matrix_sign(&linalg::scale(&dirac.h, -ONE), DEFAULT_GAP_TOL).unwrap();
        assert!(linalg::distance(&minus, &linalg::scale(&plus, -ONE)) < 1e-12);
    }

    #[test]
    fn gapless_spectrum_is_rejected() {
        let mut h = linalg::identity(4);
        h[(2, 2)] = c64::new(1e-12, 0.0);
        assert!(matches!(matrix_sign(&h, DEFAULT_GAP_TOL), Err(Error::GaplessSpectrum(_))));
    }

    #[test]
    fn restriction_edge_cases() {
        let (geom, sym) = chain_symbol(8, 0.7);
        let full = restrict_symbol(&sym, &region_projector(&geom, &Region::full(&geom), 4));
        assert_eq!(linalg::distance(&full.sigma_v, &sym.sigma), 0.0);
        let empty = restrict_symbol(&sym, &region_projector(&geom, &Region::empty(), 4));
        assert_eq!(linalg::max_abs(&empty.sigma_v), 0.0);
    }

    #[test]
    fn proper_restriction_is_mixed() {
        let (geom, sym) = chain_symbol(32, 0.5);
        let half = Region::interval(&geom, 0, 16).unwrap();
        let vals = restrict_symbol(&sym, &region_projector(&geom, &half, 4)).eigenvalues().unwrap();
        assert!(vals.iter().all(|x| x.abs() <= 1.0 + 1e-12));
        assert!(vals.iter().any(|x| x.abs() < 1.0 - 1e-6));
    }

    #[test]
    fn symbol_commutes_with_translations() {
        let (geom, sym) = chain_symbol(16, 0.5);
        assert!(crate::lattice::translation_residual(&geom, &sym.sigma, 4, 0) < 1e-10);
    }

    #[test]
    fn wilson_kernel_decays_at_lattice_mass() {
        // The nearest complex singularity of the Wilson symbol sits at Im k = ln(1 + ma)/a, and is a
        // square-root branch point, so the kernel carries a d^{-1/2} prefactor.
        let (m, a) = (0.5, 0.25);
        let geom = TorusGeometry::new(1, 256, a, m).unwrap();
        let dirac = build_dirac_wilson(&geom, &build_gamma_rep(4).unwrap(), 1.0).unwrap();
        let sym = ground_symbol(&dirac).unwrap();
        let points: Vec<(f64, f64)> = (40..=80)
            .step_by(4)
            .map(|x| {
                let block = linalg::select(&sym.sigma, &[0, 1, 2, 3], &[4 * x, 4 * x + 1, 4 * x + 2, 4 * x + 3]);
                let d = x as f64 * a;
                (d, linalg::max_abs(&block).ln() + 0.5 * d.ln())
            })
            .collect();
        let slope = crate::bounds::least_squares(&points).slope;
        let predicted = (1.0 + m * a).ln() / a;
        assert!((slope + predicted).abs() < 0.03 * predicted, "slope {slope}, predicted {predicted}");
        assert!(-slope > 0.9 * m);
    }

    #[test]
    fn dump_round_trip() {
        let (_, sym) = chain_symbol(4, 1.0);
        let mut bytes = Vec::new();
        write_symbol_dump(&mut bytes, &sym).unwrap();
        assert_eq!(bytes.len(), 64 + 16 * 16 * 16);
        assert_eq!(&bytes[..8], b"QFSYMB01");
        let (header, m) = read_symbol_dump(bytes.as_slice()).unwrap();
        assert_eq!(linalg::distance(&m, &sym.sigma), 0.0);
        assert_eq!(header.meta, SymbolMeta { backend: 0, dimension: 4, sites_per_dim: 4, spatial_dim: 1 });
        assert!(matches!(read_symbol_dump(&bytes[..100]), Err(Error::Format(_))));
        let mut corrupt = bytes.clone();
        corrupt[0] = b'X';
        assert!(matches!(read_symbol_dump(corrupt.as_slice()), Err(Error::Format(_))));
    }
}
