//! Dense complex matrix helpers shared by every module.
//!
//! Everything here is a thin layer over `faer`: Hermitian eigendecompositions,
//! spectral calculus, Schatten norms and a few index-selection utilities.

use faer::{Mat, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Dense complex matrix.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn scale(m: &CMat, z: c64) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * z)
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMat) -> CMat {
    m.conjugate().to_owned()
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint().to_owned()
}

pub fn transpose(m: &CMat) -> CMat {
    m.transpose().to_owned()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Largest entry modulus. Used for every residual check in the crate.
pub fn max_abs(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub fn frobenius(m: &CMat) -> f64 {
    m.norm_l2()
}

/// `max_abs(a - b)`.
pub fn distance(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(a.ncols(), b.ncols());
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            best = best.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    best
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..=j.min(m.nrows() - 1) {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    best
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(m: &CMat) -> Result<Self> {
        assert_eq!(m.nrows(), m.ncols(), "eigendecomposition needs a square matrix");
        if m.nrows() == 0 {
            return Ok(Self { values: Vec::new(), vectors: zeros(0, 0) });
        }
        // Symmetrize so that roundoff in the upper triangle does not leak into the result.
        let sym = Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        let evd = sym.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Convergence)?;
        let values = (0..m.nrows()).map(|i| evd.S()[i].re).collect();
        Ok(Self { values, vectors: evd.U().to_owned() })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.dim();
        let weighted = Mat::from_fn(n, n, |i, j| self.vectors[(i, j)] * f(self.values[j]));
        &weighted * self.vectors.adjoint()
    }

    /// `V f(Λ) V† · cols` restricted to the given column indices, without forming the full matrix.
    pub fn apply_to_columns(&self, f: impl Fn(f64) -> f64, cols: &[usize]) -> CMat {
        let n = self.dim();
        let weighted = Mat::from_fn(n, n, |i, j| self.vectors[(i, j)] * f(self.values[j]));
        let rows_of_adjoint = Mat::from_fn(n, cols.len(), |k, c| self.vectors[(cols[c], k)].conj());
        &weighted * &rows_of_adjoint
    }
}

pub fn eigenvalues_hermitian(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let sym = Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut vals = sym.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Convergence)?;
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values().map_err(|_| Error::Convergence)
}

/// Schatten-1 norm.
pub fn trace_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values strictly above `tol`.
pub fn rank(m: &CMat, tol: f64) -> Result<usize> {
    Ok(singular_values(m)?.iter().filter(|&&s| s > tol).count())
}

/// Submatrix with the given row and column index lists.
pub fn select(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Embeds `block` into a zero matrix of size `dim` at the given indices.
pub fn embed(block: &CMat, rows: &[usize], cols: &[usize], dim: usize) -> CMat {
    let mut out = zeros(dim, dim);
    for (bj, &j) in cols.iter().enumerate() {
        for (bi, &i) in rows.iter().enumerate() {
            out[(i, j)] = block[(bi, bj)];
        }
    }
    out
}

/// Unitary inverse (`U⁻¹ = U†`), checked.
pub fn unitary_inverse(u: &CMat) -> CMat {
    debug_assert!(distance(&(u * u.adjoint()), &identity(u.nrows())) < 1e-10);
    adjoint(u)
}

/// Real-linear embedding of a complex matrix: `a + ib ↦ [[a, -b], [b, a]]`.
pub fn realify(m: &CMat) -> Mat<f64> {
    let (r, c) = (m.nrows(), m.ncols());
    Mat::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

pub fn real_singular_values(m: &Mat<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values().map_err(|_| Error::Convergence)
}

/// Inner product `⟨u, v⟩ = Σ conj(u_i) v_i` of two column vectors.
pub fn inner(u: &CMat, v: &CMat) -> c64 {
    assert_eq!(u.nrows(), v.nrows());
    (0..u.nrows()).fold(ZERO, |acc, i| acc + u[(i, 0)].conj() * v[(i, 0)])
}

pub fn vector_norm(v: &CMat) -> f64 {
    v.norm_l2()
}
