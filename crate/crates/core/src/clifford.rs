//! Gamma matrices, charge conjugation and time reversal.
//!
//! Representations are built from the usual tensor ladder of Pauli matrices with
//! signature `diag(+1, -1, ..., -1)`: `γ⁰` is Hermitian, the spatial `γⁱ` are
//! anti-Hermitian. Intertwiners are found by projecting a generic probe matrix
//! onto the joint fixed space of the twisted conjugation maps
//! `X ↦ ± L_a X R_a⁻¹`; those maps are commuting involutions, so the ordered
//! product of their averages is the orthogonal projector onto the solution space.

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMat, I, ONE, ZERO};

/// Singular values below this count as zero in every rank decision here.
pub const RANK_TOL: f64 = 1e-10;

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn from_value(x: f64) -> Self {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Tabulated charge-conjugation sign `ε(D)`; `None` outside the pseudo-Majorana dimensions.
pub fn epsilon_table(dimension: usize) -> Option<Sign> {
    match dimension % 8 {
        2..=4 => Some(Sign::Minus),
        0 | 1 => Some(Sign::Plus),
        _ => None,
    }
}

/// Tabulated `T²`; `None` where no time reversal exists.
pub fn t_squared_table(dimension: usize) -> Option<Sign> {
    match dimension % 8 {
        4 => Some(Sign::Minus),
        0..=2 => Some(Sign::Plus),
        _ => None,
    }
}

fn pauli() -> [CMat; 4] {
    let r = |x: f64| c64::new(x, 0.0);
    let id = Mat::from_fn(2, 2, |i, j| if i == j { ONE } else { ZERO });
    let x = Mat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
    let y = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => c64::new(0.0, -1.0),
        (1, 0) => I,
        _ => ZERO,
    });
    let z = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => r(1.0),
        (1, 1) => r(-1.0),
        _ => ZERO,
    });
    [id, x, y, z]
}

fn kron_chain(factors: &[&CMat]) -> CMat {
    factors.iter().fold(linalg::identity(1), |acc, f| linalg::kron(&acc, f))
}

/// Dirac matrices `γ⁰ … γ^{D-1}` for spacetime dimension `D`.
#[derive(Debug, Clone)]
pub struct GammaRep {
    dimension: usize,
    spinor_size: usize,
    gammas: Vec<CMat>,
}

impl GammaRep {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::DimensionTooSmall(dimension));
        }
        let [id, x, y, z] = pauli();
        let k = dimension / 2;
        let mut euclidean = Vec::with_capacity(dimension);
        for j in 0..k {
            for middle in [&x, &y] {
                let mut factors: Vec<&CMat> = Vec::with_capacity(k);
                factors.extend(std::iter::repeat_n(&z, j));
                factors.push(middle);
                factors.extend(std::iter::repeat_n(&id, k - j - 1));
                euclidean.push(kron_chain(&factors));
            }
        }
        if dimension % 2 == 1 {
            let factors: Vec<&CMat> = std::iter::repeat_n(&z, k).collect();
            euclidean.push(kron_chain(&factors));
        }
        let gammas =
            euclidean.into_iter().enumerate().map(|(a, e)| if a == 0 { e } else { linalg::scale(&e, I) }).collect();
        Ok(Self { dimension, spinor_size: 1 << k, gammas })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spinor_size(&self) -> usize {
        self.spinor_size
    }

    pub fn gamma(&self, a: usize) -> &CMat {
        &self.gammas[a]
    }

    pub fn gammas(&self) -> &[CMat] {
        &self.gammas
    }

    /// Diagonal entry `η^{aa}` of the metric.
    pub fn metric(&self, a: usize) -> f64 {
        if a == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `max_{a,b} ‖γ^a γ^b + γ^b γ^a − 2η^{ab}‖`.
    pub fn clifford_residual(&self) -> f64 {
        let n = self.spinor_size;
        let mut worst = 0.0f64;
        for a in 0..self.dimension {
            for b in a..self.dimension {
                let ga = &self.gammas[a];
                let gb = &self.gammas[b];
                let anti = &(ga * gb) + &(gb * ga);
                let target = if a == b {
                    linalg::scale(&linalg::identity(n), c64::new(2.0 * self.metric(a), 0.0))
                } else {
                    linalg::zeros(n, n)
                };
                worst = worst.max(linalg::distance(&anti, &target));
            }
        }
        worst
    }

    /// Worst deviation from `γ⁰ = γ⁰†` and `γⁱ = −γⁱ†`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.gammas
            .iter()
            .enumerate()
            .map(|(a, g)| {
                let target = if a == 0 { linalg::adjoint(g) } else { linalg::scale(&linalg::adjoint(g), -ONE) };
                linalg::distance(g, &target)
            })
            .fold(0.0, f64::max)
    }

    /// Ordered product `γ^{a₁} ⋯ γ^{a_k}` (identity for an empty list).
    pub fn monomial(&self, indices: &[usize]) -> CMat {
        indices.iter().fold(linalg::identity(self.spinor_size), |acc, &a| &acc * &self.gammas[a])
    }

    /// Chirality `γ^{D+1}` for even `D`, phased so that it squares to `+1`.
    pub fn chirality(&self) -> Option<CMat> {
        if self.dimension % 2 == 1 {
            return None;
        }
        let all: Vec<usize> = (0..self.dimension).collect();
        let product = self.monomial(&all);
        let square = (&product * &product)[(0, 0)].re;
        Some(if square > 0.0 { product } else { linalg::scale(&product, I) })
    }
}

/// Builds the gamma-matrix representation for spacetime dimension `dimension`.
pub fn build_gamma_rep(dimension: usize) -> Result<GammaRep> {
    GammaRep::new(dimension)
}

/// Deterministic dense probe with no special structure.
fn probe(n: usize, variant: usize) -> CMat {
    let shift = 0.37 * variant as f64;
    Mat::from_fn(n, n, |i, j| {
        let (fi, fj) = (i as f64, j as f64);
        let modulus = 1.0 + 0.25 * ((i * 7 + j * 3 + variant) % 5) as f64;
        c64::from_polar(modulus, 0.618_033_988_7 * fi + std::f64::consts::SQRT_2 * fj + 0.1 * fi * fj + shift)
    })
}

/// Projects `x` onto `{X : X = sign · L_a X R_a⁻¹ ∀a}`.
fn project_twisted(x: &CMat, left: &[CMat], right_inv: &[CMat], sign: f64) -> CMat {
    let s = c64::new(sign, 0.0);
    let mut out = x.clone();
    for (l, r) in left.iter().zip(right_inv) {
        let twisted = &(l * &out) * r;
        out = Mat::from_fn(out.nrows(), out.ncols(), |i, j| (out[(i, j)] + s * twisted[(i, j)]) * 0.5);
    }
    out
}

/// Dimension of the twisted fixed space (0, 1, or a lower bound of 2) together with one nonzero element.
fn twisted_solution(left: &[CMat], right_inv: &[CMat], sign: f64, n: usize) -> (usize, Option<CMat>) {
    let first = project_twisted(&probe(n, 0), left, right_inv, sign);
    let second = project_twisted(&probe(n, 1), left, right_inv, sign);
    let stacked = Mat::from_fn(n * n, 2, |k, c| {
        let m = if c == 0 { &first } else { &second };
        m[(k % n, k / n)]
    });
    let scale = probe(n, 0).norm_l2();
    let dim = linalg::rank(&stacked, RANK_TOL * scale).unwrap_or(0);
    if dim == 0 {
        (0, None)
    } else {
        (dim, Some(first))
    }
}

/// Multiplies by a phase so the first non-negligible entry (row-major) is real positive.
fn fix_phase(m: &CMat) -> CMat {
    let largest = linalg::max_abs(m);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.norm() > 1e-8 * largest {
                return linalg::scale(m, z.conj() / z.norm());
            }
        }
    }
    m.clone()
}

/// Charge conjugation `𝔠`, its sign, the chirality and the maps `𝖡`, `𝖠`.
#[derive(Debug, Clone)]
pub struct IntertwinerSet {
    pub charge_conjugation: CMat,
    pub epsilon: Sign,
    pub chirality: Option<CMat>,
    pub b_matrix: CMat,
    pub a_matrix: CMat,
    /// Solution-space dimensions of `𝔠⁻¹ conj(γ^a) 𝔠 = ±γ^a`, indexed `[+, −]`.
    pub solution_dims: [usize; 2],
}

impl IntertwinerSet {
    /// `𝔠⁻¹`, which equals `conj(𝔠)` after normalization.
    pub fn charge_conjugation_inverse(&self) -> CMat {
        linalg::conj(&self.charge_conjugation)
    }

    /// Majorana conjugation `Γk = 𝔠⁻¹ conj(k)` on a single spinor.
    pub fn majorana(&self) -> Antiunitary {
        Antiunitary::new(self.charge_conjugation_inverse())
    }

    /// `‖conj(𝔠)𝔠 − 1‖`.
    pub fn normalization_residual(&self) -> f64 {
        let c = &self.charge_conjugation;
        linalg::distance(&(&linalg::conj(c) * c), &linalg::identity(c.nrows()))
    }

    /// `max_a ‖𝔠⁻¹ conj(γ^a) 𝔠 − ε γ^a‖`.
    pub fn intertwining_residual(&self, rep: &GammaRep) -> f64 {
        let c = &self.charge_conjugation;
        let cinv = self.charge_conjugation_inverse();
        let eps = c64::new(self.epsilon.value(), 0.0);
        rep.gammas()
            .iter()
            .map(|g| linalg::distance(&(&(&cinv * &linalg::conj(g)) * c), &linalg::scale(g, eps)))
            .fold(0.0, f64::max)
    }

    /// `‖𝖠 − conj(𝖡)𝔠‖` and `‖conj(𝖠)ᵀ − 𝖠‖`, the larger of the two.
    pub fn a_matrix_residual(&self) -> f64 {
        let assembled = &linalg::conj(&self.b_matrix) * &self.charge_conjugation;
        linalg::distance(&assembled, &self.a_matrix)
            .max(linalg::distance(&linalg::adjoint(&self.a_matrix), &self.a_matrix))
    }

    /// Chirality residuals: `‖χ² − 1‖` and `max_a ‖χγ^a + γ^aχ‖`.
    pub fn chirality_residual(&self, rep: &GammaRep) -> f64 {
        let Some(chi) = &self.chirality else { return 0.0 };
        let n = chi.nrows();
        let sq = linalg::distance(&(chi * chi), &linalg::identity(n));
        rep.gammas().iter().map(|g| linalg::max_abs(&(&(chi * g) + &(g * chi)))).fold(sq, f64::max)
    }
}

/// Solves for the charge-conjugation intertwiner of `rep`.
pub fn solve_charge_conjugation(rep: &GammaRep) -> Result<IntertwinerSet> {
    let d = rep.dimension();
    let n = rep.spinor_size();
    let left: Vec<CMat> = rep.gammas().iter().map(linalg::conj).collect();
    let right_inv: Vec<CMat> = rep.gammas().iter().map(linalg::unitary_inverse).collect();

    let mut solution_dims = [0usize; 2];
    // Candidate per sign: normalized C, or the failing normalization value.
    let mut candidates: Vec<(Sign, std::result::Result<CMat, f64>)> = Vec::new();
    for (slot, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
        let (dim, sol) = twisted_solution(&left, &right_inv, sign.value(), n);
        solution_dims[slot] = dim;
        let Some(c) = sol else { continue };
        let product = &linalg::conj(&c) * &c;
        let lambda = product[(0, 0)];
        let off = linalg::distance(&product, &linalg::scale(&linalg::identity(n), lambda));
        let positive = lambda.re > 0.0 && lambda.im.abs() <= 1e-10 * lambda.norm() && off <= 1e-10 * lambda.norm();
        if positive {
            let normalized = fix_phase(&linalg::scale(&c, c64::new(1.0 / lambda.re.sqrt(), 0.0)));
            candidates.push((sign, Ok(normalized)));
        } else {
            candidates.push((sign, Err(lambda.re)));
        }
    }

    let pick = |sign: Sign| candidates.iter().find(|(s, _)| *s == sign);
    let chosen = match epsilon_table(d) {
        Some(expected) => match pick(expected) {
            Some((_, Ok(c))) => (expected, c.clone()),
            Some((_, Err(value))) => return Err(Error::NormalizationFailure { dim: d, value: *value }),
            None => return Err(Error::NoSolution(d)),
        },
        None => {
            let ok: Vec<_> = candidates.iter().filter_map(|(s, c)| c.as_ref().ok().map(|c| (*s, c.clone()))).collect();
            match (ok.len(), candidates.first()) {
                (1, _) => ok.into_iter().next().unwrap(),
                (0, None) => return Err(Error::NoSolution(d)),
                (_, Some((_, Err(value)))) => return Err(Error::NormalizationFailure { dim: d, value: *value }),
                _ => return Err(Error::NormalizationFailure { dim: d, value: f64::NAN }),
            }
        }
    };
    let (epsilon, charge_conjugation) = chosen;

    // 𝖡 intertwines γ with its transpose: 𝖡γ^a𝖡⁻¹ = ε (γ^a)ᵀ.
    let left_b: Vec<CMat> = rep.gammas().iter().map(linalg::transpose).collect();
    let (_, b_raw) = twisted_solution(&left_b, &right_inv, epsilon.value(), n);
    let b_raw = b_raw.ok_or(Error::NoSolution(d))?;
    // Fix the free constant so that 𝖠 = conj(𝖡)𝔠 is Hermitian with γ⁰𝖠 positive, and ‖𝖡‖ = 1.
    let a_raw = &linalg::conj(&b_raw) * &charge_conjugation;
    let pairing = (rep.gamma(0) * &a_raw).diagonal().column_vector().iter().fold(ZERO, |acc, z| acc + *z);
    let b_norm = linalg::operator_norm(&b_raw)?;
    // conj(z) must equal |z| conj(pairing)/|pairing|, so z = pairing/|pairing| / ‖B_raw‖.
    let z = pairing / pairing.norm() / b_norm;
    let b_matrix = linalg::scale(&b_raw, z);
    let a_matrix = &linalg::conj(&b_matrix) * &charge_conjugation;

    Ok(IntertwinerSet { charge_conjugation, epsilon, chirality: rep.chirality(), b_matrix, a_matrix, solution_dims })
}

/// Antiunitary map `k ↦ W conj(k)`, stored through its linear part `W`.
#[derive(Debug, Clone)]
pub struct Antiunitary {
    linear: CMat,
}

impl Antiunitary {
    pub fn new(linear: CMat) -> Self {
        assert_eq!(linear.nrows(), linear.ncols());
        Self { linear }
    }

    pub fn linear(&self) -> &CMat {
        &self.linear
    }

    pub fn dim(&self) -> usize {
        self.linear.nrows()
    }

    /// Applies the map to each column of `v`.
    pub fn apply(&self, v: &CMat) -> CMat {
        &self.linear * &linalg::conj(v)
    }

    /// Linear operator `A²` for this map `A`.
    pub fn square(&self) -> CMat {
        &self.linear * &linalg::conj(&self.linear)
    }

    /// `A X A⁻¹` for a linear operator `X`.
    pub fn conjugate_operator(&self, x: &CMat) -> CMat {
        &(&self.linear * &linalg::conj(x)) * self.linear.adjoint()
    }

    /// `‖AB − BA‖` as linear maps.
    pub fn commutator_residual(&self, other: &Antiunitary) -> f64 {
        let ab = &self.linear * &linalg::conj(&other.linear);
        let ba = &other.linear * &linalg::conj(&self.linear);
        linalg::distance(&ab, &ba)
    }

    /// `‖WW† − 1‖`; zero iff the map is antiunitary.
    pub fn unitarity_residual(&self) -> f64 {
        linalg::distance(&(&self.linear * self.linear.adjoint()), &linalg::identity(self.dim()))
    }

    /// The same map acting independently on each of `sites` lattice sites (site-major ordering).
    pub fn sitewise(&self, sites: usize) -> Antiunitary {
        Antiunitary::new(linalg::kron(&linalg::identity(sites), &self.linear))
    }
}

/// How a time reversal is lifted to the doubled space `K ⊕ K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Doubling {
    /// `k ⊕ k' ↦ Tk' ⊕ −Tk`, used when `T² = −1`.
    Swap,
    /// `k ⊕ k' ↦ Tk ⊕ Tk'`.
    Diagonal,
}

/// Antiunitary time reversal `T = U ∘ Γ`.
#[derive(Debug, Clone)]
pub struct TimeReversal {
    pub dimension: usize,
    /// Unitary factor on a single spinor.
    pub u: CMat,
    pub t_squared: Sign,
    /// Linear part `U 𝔠⁻¹` on a single spinor.
    base_linear: CMat,
    doubling: Option<Doubling>,
}

impl TimeReversal {
    pub fn doubling(&self) -> Option<Doubling> {
        self.doubling
    }

    fn copy_block(&self) -> Option<CMat> {
        self.doubling.map(|kind| match kind {
            Doubling::Swap => Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => ONE,
                (1, 0) => -ONE,
                _ => ZERO,
            }),
            Doubling::Diagonal => linalg::identity(2),
        })
    }

    /// The map on spinors (or on spinor pairs `copy ⊗ spinor` when doubled).
    pub fn spinor_antiunitary(&self) -> Antiunitary {
        match self.copy_block() {
            Some(block) => Antiunitary::new(linalg::kron(&block, &self.base_linear)),
            None => Antiunitary::new(self.base_linear.clone()),
        }
    }

    /// The map on lattice spinor fields; doubled fields use `[copy][site][spinor]` ordering.
    pub fn lattice_antiunitary(&self, sites: usize) -> Antiunitary {
        let single = linalg::kron(&linalg::identity(sites), &self.base_linear);
        match self.copy_block() {
            Some(block) => Antiunitary::new(linalg::kron(&block, &single)),
            None => Antiunitary::new(single),
        }
    }

    /// Worst of `‖Tγ⁰T⁻¹ − γ⁰‖`, `‖TγⁱT⁻¹ + γⁱ‖` on a single spinor.
    pub fn clifford_residual(&self, rep: &GammaRep) -> f64 {
        let t = Antiunitary::new(self.base_linear.clone());
        rep.gammas()
            .iter()
            .enumerate()
            .map(|(a, g)| {
                let target = if a == 0 { g.clone() } else { linalg::scale(g, -ONE) };
                linalg::distance(&t.conjugate_operator(g), &target)
            })
            .fold(0.0, f64::max)
    }
}

/// Sign `s` with `M ≈ s·1`, or an error if `M` is not `±1`.
fn identity_sign(m: &CMat, dimension: usize) -> Result<Sign> {
    let n = m.nrows();
    let s = m[(0, 0)].re;
    let residual = linalg::distance(m, &linalg::scale(&linalg::identity(n), c64::new(s.signum(), 0.0)));
    if residual > 1e-10 {
        return Err(Error::DimensionMismatch(format!("T² is not ±1 in dimension {dimension} (residual {residual:e})")));
    }
    Ok(Sign::from_value(s))
}

/// Builds `T = U ∘ Γ` with `U = γ⁰γ^{D+1}` (D ≡ 2, 4 mod 8) or `U = γ⁰` (D ≡ 0, 1 mod 8).
pub fn build_time_reversal(rep: &GammaRep, intertwiners: &IntertwinerSet) -> Result<TimeReversal> {
    let d = rep.dimension();
    let u = match d % 8 {
        2 | 4 => {
            let chi = intertwiners.chirality.as_ref().ok_or(Error::DimensionUnsupported(d))?;
            rep.gamma(0) * chi
        }
        0 | 1 => rep.gamma(0).clone(),
        _ => return Err(Error::DimensionUnsupported(d)),
    };
    let base_linear = &u * &intertwiners.charge_conjugation_inverse();
    let t_squared = identity_sign(&(&base_linear * &linalg::conj(&base_linear)), d)?;
    if Some(t_squared) != t_squared_table(d) {
        return Err(Error::DimensionMismatch(format!(
            "computed T² = {} disagrees with the sign table in dimension {d}",
            t_squared.as_i8()
        )));
    }
    Ok(TimeReversal { dimension: d, u, t_squared, base_linear, doubling: None })
}

/// Lifts `t` to `K ⊕ K`: the swap form when `T² = −1`, the diagonal form otherwise.
pub fn doubled_time_reversal(t: &TimeReversal) -> TimeReversal {
    let kind = match t.t_squared {
        Sign::Minus => Doubling::Swap,
        Sign::Plus => Doubling::Diagonal,
    };
    let mut doubled = TimeReversal { doubling: Some(kind), ..t.clone() };
    let square = doubled.spinor_antiunitary().square();
    doubled.t_squared = Sign::from_value(square[(0, 0)].re);
    doubled
}

/// How the explicit constraint system was ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RankRoute {
    /// SVD of the stacked `D·n² × n²` system.
    StackedSvd,
    /// Eigenvalues of its Gram matrix, assembled from Kronecker factors.
    Gram,
}

/// Result of searching for `U` with `γ^a U γ^a = ε U` for all `a`.
#[derive(Debug, Clone, Serialize)]
pub struct NoGoCertificate {
    pub dimension: usize,
    pub epsilon: i8,
    /// Nullity of the explicit linear system over the full `n²`-dimensional matrix space.
    pub solution_dimension: usize,
    pub smallest_singular_value: f64,
    pub rank_route: RankRoute,
    /// Trace of the joint-eigenspace projector, an independent count of the same dimension.
    pub projector_trace: f64,
}

impl NoGoCertificate {
    pub fn time_reversal_exists(&self) -> bool {
        self.solution_dimension > 0
    }

    /// Both counting routes return the same integer.
    pub fn routes_agree(&self) -> bool {
        (self.projector_trace - self.solution_dimension as f64).abs() < 1e-6
    }
}

/// Column-major superoperator matrix of `U ↦ g U g`.
fn sandwich_matrix(g: &CMat) -> CMat {
    linalg::kron(&linalg::transpose(g), g)
}

fn projector_trace(rep: &GammaRep, eps: f64) -> f64 {
    fn visit(rep: &GammaRep, start: usize, left: &CMat, right: &CMat, weight: f64, eps: f64, acc: &mut c64) {
        let tl = left.diagonal().column_vector().iter().fold(ZERO, |s, z| s + *z);
        let tr = right.diagonal().column_vector().iter().fold(ZERO, |s, z| s + *z);
        *acc += tl * tr * weight;
        for b in start..rep.dimension() {
            let g = rep.gamma(b);
            visit(rep, b + 1, &(left * g), &(g * right), weight * eps, eps, acc);
        }
    }
    let n = rep.spinor_size();
    let mut acc = ZERO;
    visit(rep, 0, &linalg::identity(n), &linalg::identity(n), 1.0, eps, &mut acc);
    acc.re / (1u64 << rep.dimension()) as f64
}

/// Counts solutions of `γ^a U γ^a = ε(D) U` over all `n × n` matrices `U`.
///
/// A zero count for `D ≡ 3 mod 8` certifies that no time reversal exists there.
pub fn certify_no_time_reversal(rep: &GammaRep) -> NoGoCertificate {
    let d = rep.dimension();
    let n = rep.spinor_size();
    let eps = epsilon_table(d).unwrap_or(Sign::Minus);
    let e = c64::new(eps.value(), 0.0);
    let nn = n * n;
    let sandwiches: Vec<CMat> = rep.gammas().iter().map(sandwich_matrix).collect();

    let (singular, route) = if nn <= 256 {
        let mut stacked = linalg::zeros(d * nn, nn);
        for (a, s) in sandwiches.iter().enumerate() {
            for j in 0..nn {
                for i in 0..nn {
                    let shift = if i == j { e } else { ZERO };
                    stacked[(a * nn + i, j)] = s[(i, j)] - shift;
                }
            }
        }
        (linalg::singular_values(&stacked).unwrap_or_default(), RankRoute::StackedSvd)
    } else {
        // (S − ε)†(S − ε) = S†S − ε(S + S†) + 1 with S†S = (conj(g) gᵀ) ⊗ (g†g).
        let mut gram = linalg::zeros(nn, nn);
        for (g, s) in rep.gammas().iter().zip(&sandwiches) {
            let sts = linalg::kron(&(&linalg::conj(g) * &linalg::transpose(g)), &(g.adjoint() * g));
            for j in 0..nn {
                for i in 0..nn {
                    let id = if i == j { ONE } else { ZERO };
                    gram[(i, j)] += sts[(i, j)] - e * (s[(i, j)] + s[(j, i)].conj()) + id;
                }
            }
        }
        let mut values: Vec<f64> =
            linalg::eigenvalues_hermitian(&gram).unwrap_or_default().into_iter().map(|x| x.max(0.0).sqrt()).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        (values, RankRoute::Gram)
    };
    let rank = singular.iter().filter(|&&s| s > RANK_TOL).count();
    NoGoCertificate {
        dimension: d,
        epsilon: eps.as_i8(),
        solution_dimension: nn - rank,
        smallest_singular_value: singular.last().copied().unwrap_or(0.0),
        rank_route: route,
        projector_trace: projector_trace(rep, eps.value()),
    }
}

/// One row of the gamma table.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GammaTableRow {
    pub dimension: usize,
    pub spinor_size: usize,
    pub epsilon: Option<i8>,
    pub time_reversal_exists: bool,
    pub t_squared: Option<i8>,
    pub note: String,
}

/// Summarizes representation, charge conjugation and time reversal for one dimension.
pub fn gamma_table_row(dimension: usize) -> Result<GammaTableRow> {
    let rep = build_gamma_rep(dimension)?;
    let mut row = GammaTableRow {
        dimension,
        spinor_size: rep.spinor_size(),
        epsilon: None,
        time_reversal_exists: false,
        t_squared: None,
        note: String::new(),
    };
    let iset = match solve_charge_conjugation(&rep) {
        Ok(iset) => iset,
        Err(err) => {
            row.note = format!("no Majorana conjugation: {err}");
            return Ok(row);
        }
    };
    row.epsilon = Some(iset.epsilon.as_i8());
    match build_time_reversal(&rep, &iset) {
        Ok(t) => {
            row.time_reversal_exists = true;
            row.t_squared = Some(t.t_squared.as_i8());
        }
        Err(Error::DimensionUnsupported(_)) => {
            let cert = certify_no_time_reversal(&rep);
            row.time_reversal_exists = cert.time_reversal_exists();
            row.note = format!("constraint solution dimension {}", cert.solution_dimension);
        }
        Err(err) => row.note = err.to_string(),
    }
    Ok(row)
}
