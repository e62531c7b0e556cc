//! Flat periodic tori, lattice Dirac operators, Lichnerowicz operators, regions and cutoffs.
//!
//! Sites are numbered with axis 0 fastest: `site = Σ_j c_j N^j`. Spinor fields use
//! site-major ordering, so the index of spinor component `s` at `site` is `site·n + s`.

use std::f64::consts::PI;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::clifford::GammaRep;
use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMat, I, ZERO};

/// Largest operator dimension built unless a caller raises the cap.
pub const DEFAULT_SIZE_CAP: usize = 8192;

/// Scalar curvature `R(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Curvature {
    Constant(f64),
    PerSite(Vec<f64>),
}

impl Default for Curvature {
    fn default() -> Self {
        Curvature::Constant(0.0)
    }
}

/// `N^p` sites with spacing `a` on a flat torus, mass `m` and curvature profile `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGeometry {
    spatial_dim: usize,
    sites_per_dim: usize,
    spacing: f64,
    mass: f64,
    curvature: Curvature,
}

impl TorusGeometry {
    pub fn new(spatial_dim: usize, sites_per_dim: usize, spacing: f64, mass: f64) -> Result<Self> {
        if !(1..=3).contains(&spatial_dim) {
            return Err(Error::InvalidGeometry(format!("spatial_dim must be 1, 2 or 3, got {spatial_dim}")));
        }
        if sites_per_dim < 4 || !sites_per_dim.is_multiple_of(2) {
            return Err(Error::InvalidGeometry(format!("N must be even and at least 4, got {sites_per_dim}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!("spacing must be positive, got {spacing}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidGeometry(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { spatial_dim, sites_per_dim, spacing, mass, curvature: Curvature::default() })
    }

    /// Replaces the curvature profile; a per-site list must have one finite entry per site.
    pub fn with_curvature(mut self, curvature: Curvature) -> Result<Self> {
        match &curvature {
            Curvature::Constant(r) if !r.is_finite() => {
                return Err(Error::InvalidGeometry("curvature must be finite".into()));
            }
            Curvature::PerSite(values) => {
                if values.len() != self.num_sites() {
                    return Err(Error::InvalidGeometry(format!(
                        "per-site curvature has {} entries, lattice has {} sites",
                        values.len(),
                        self.num_sites()
                    )));
                }
                if values.iter().any(|r| !r.is_finite()) {
                    return Err(Error::InvalidGeometry("curvature must be finite".into()));
                }
            }
            _ => {}
        }
        self.curvature = curvature;
        Ok(self)
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn sites_per_dim(&self) -> usize {
        self.sites_per_dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn curvature(&self) -> &Curvature {
        &self.curvature
    }

    pub fn num_sites(&self) -> usize {
        self.sites_per_dim.pow(self.spatial_dim as u32)
    }

    pub fn curvature_at(&self, site: usize) -> f64 {
        match &self.curvature {
            Curvature::Constant(r) => *r,
            Curvature::PerSite(values) => values[site],
        }
    }

    pub fn has_constant_curvature(&self) -> bool {
        matches!(self.curvature, Curvature::Constant(_))
    }

    /// `inf_x (m² + R(x)/4)`.
    pub fn effective_mass_squared(&self) -> f64 {
        let m2 = self.mass * self.mass;
        match &self.curvature {
            Curvature::Constant(r) => m2 + r / 4.0,
            Curvature::PerSite(values) => values.iter().map(|r| m2 + r / 4.0).fold(f64::INFINITY, f64::min),
        }
    }

    /// `M = √inf(m² + R/4)`.
    pub fn effective_mass(&self) -> Result<f64> {
        let m2 = self.effective_mass_squared();
        if m2 > 0.0 {
            Ok(m2.sqrt())
        } else {
            Err(Error::PositivityViolation(m2))
        }
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let n = self.sites_per_dim;
        (0..self.spatial_dim).map(|j| (site / n.pow(j as u32)) % n).collect()
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        let n = self.sites_per_dim;
        coords.iter().rev().fold(0, |acc, &c| acc * n + c % n)
    }

    /// Site reached from `site` after `steps` hops along `axis`, with periodic wrap.
    pub fn shift(&self, site: usize, axis: usize, steps: isize) -> usize {
        let n = self.sites_per_dim as isize;
        let mut c = self.coords(site);
        c[axis] = (c[axis] as isize + steps).rem_euclid(n) as usize;
        self.site_index(&c)
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site < self.num_sites() {
            Ok(())
        } else {
            Err(Error::SiteOutOfRange(site))
        }
    }
}

/// Minimum-image Euclidean distance between two sites.
pub fn torus_distance(geom: &TorusGeometry, x: usize, y: usize) -> f64 {
    let n = geom.sites_per_dim;
    let (cx, cy) = (geom.coords(x), geom.coords(y));
    let sq: usize = cx
        .iter()
        .zip(&cy)
        .map(|(&a, &b)| {
            let diff = a.abs_diff(b);
            let wrapped = diff.min(n - diff);
            wrapped * wrapped
        })
        .sum();
    (sq as f64).sqrt() * geom.spacing
}

/// A set of lattice sites, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    sites: Vec<usize>,
}

impl Region {
    pub fn new(geom: &TorusGeometry, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut sites: Vec<usize> = sites.into_iter().collect();
        for &s in &sites {
            geom.check_site(s)?;
        }
        sites.sort_unstable();
        sites.dedup();
        Ok(Self { sites })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(geom: &TorusGeometry) -> Self {
        Self { sites: (0..geom.num_sites()).collect() }
    }

    /// Axis-aligned box with corner `origin` and `extent[j]` sites along each axis, wrapping periodically.
    pub fn block(geom: &TorusGeometry, origin: &[usize], extent: &[usize]) -> Result<Self> {
        let p = geom.spatial_dim;
        if origin.len() != p || extent.len() != p {
            return Err(Error::InvalidGeometry(format!("box needs {p} coordinates")));
        }
        if extent.iter().any(|&e| e > geom.sites_per_dim) {
            return Err(Error::InvalidGeometry("box is larger than the torus".into()));
        }
        let total: usize = extent.iter().product();
        let mut sites = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let coords: Vec<usize> = (0..p)
                .map(|j| {
                    let c = origin[j] + rem % extent[j];
                    rem /= extent[j];
                    c
                })
                .collect();
            sites.push(geom.site_index(&coords));
        }
        Region::new(geom, sites)
    }

    /// `len` consecutive sites along axis 0 starting at `start`, one site thick in the other axes.
    pub fn interval(geom: &TorusGeometry, start: usize, len: usize) -> Result<Self> {
        let mut origin = vec![0; geom.spatial_dim];
        origin[0] = start;
        let mut extent = vec![1; geom.spatial_dim];
        extent[0] = len;
        Region::block(geom, &origin, &extent)
    }

    pub fn complement(&self, geom: &TorusGeometry) -> Self {
        let mut keep = vec![true; geom.num_sites()];
        for &s in &self.sites {
            keep[s] = false;
        }
        Self { sites: (0..geom.num_sites()).filter(|&s| keep[s]).collect() }
    }

    pub fn union(&self, other: &Region) -> Self {
        let mut sites: Vec<usize> = self.sites.iter().chain(&other.sites).copied().collect();
        sites.sort_unstable();
        sites.dedup();
        Self { sites }
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.sites.iter().all(|&s| other.contains(s))
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.sites.iter().all(|&s| !other.contains(s))
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Spinor-field indices `site·n + s` for every site in the region.
    pub fn indices(&self, spinor_size: usize) -> Vec<usize> {
        self.sites.iter().flat_map(|&site| (0..spinor_size).map(move |s| site * spinor_size + s)).collect()
    }
}

/// Diagonal projector `P_V` onto the spinor fields supported in a region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionProjector {
    region: Region,
    spinor_size: usize,
    dim: usize,
}

impl RegionProjector {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spinor_size(&self) -> usize {
        self.spinor_size
    }

    pub fn indices(&self) -> Vec<usize> {
        self.region.indices(self.spinor_size)
    }

    /// Diagonal entries of `P_V`.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for i in self.indices() {
            d[i] = 1.0;
        }
        d
    }

    pub fn matrix(&self) -> CMat {
        let d = self.diagonal();
        Mat::from_fn(self.dim, self.dim, |i, j| if i == j { c64::new(d[i], 0.0) } else { ZERO })
    }

    /// `P_V X P_V` without forming `P_V`.
    pub fn compress(&self, x: &CMat) -> CMat {
        let d = self.diagonal();
        Mat::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * (d[i] * d[j]))
    }
}

/// Projector onto the spinor fields over `region`; an empty region gives the zero projector.
pub fn region_projector(geom: &TorusGeometry, region: &Region, spinor_size: usize) -> RegionProjector {
    RegionProjector { region: region.clone(), spinor_size, dim: geom.num_sites() * spinor_size }
}

/// `min_{x∈A, y∈B}` torus distance.
pub fn region_distance(geom: &TorusGeometry, a: &Region, b: &Region) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if !a.is_disjoint(b) {
        return Err(Error::RegionOverlap);
    }
    let mut best = f64::INFINITY;
    for &x in a.sites() {
        for &y in b.sites() {
            best = best.min(torus_distance(geom, x, y));
        }
    }
    Ok(best)
}

/// Distance from every site to the nearest site of `region` (`∞` if the region is empty).
pub fn distance_field(geom: &TorusGeometry, region: &Region) -> Vec<f64> {
    (0..geom.num_sites())
        .map(|x| region.sites().iter().map(|&y| torus_distance(geom, x, y)).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Discretization of the spinor Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Exact momentum symbol; `H² = L` holds exactly, `H` is nonlocal.
    Spectral,
    /// Nearest-neighbour central differences plus a Wilson term of strength `r`.
    Wilson { r: f64 },
}

/// Dense lattice Dirac Hamiltonian together with its Lichnerowicz operator.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    pub h: CMat,
    pub l: CMat,
    pub backend: Backend,
    pub geometry: TorusGeometry,
    /// Spacetime dimension of the gamma representation used.
    pub dimension: usize,
    pub spinor_size: usize,
}

impl DiracOperator {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// `‖H² − L‖` entrywise.
    pub fn lichnerowicz_residual(&self) -> f64 {
        linalg::distance(&(&self.h * &self.h), &self.l)
    }
}

fn check_rep(geom: &TorusGeometry, rep: &GammaRep, cap: usize) -> Result<usize> {
    if rep.dimension() < geom.spatial_dim + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} spatial directions need at least {} gamma matrices, representation has {}",
            geom.spatial_dim,
            geom.spatial_dim + 1,
            rep.dimension()
        )));
    }
    let size = geom.num_sites() * rep.spinor_size();
    if size > cap {
        return Err(Error::SizeOverflow { size, cap });
    }
    Ok(size)
}

/// Lattice momentum `2πw/(Na)` for frequency `w ∈ {−N/2+1, …, N/2}`, indexed by `w mod N`.
fn momentum(geom: &TorusGeometry, index: usize) -> f64 {
    let n = geom.sites_per_dim as isize;
    let mut w = index as isize;
    if w > n / 2 {
        w -= n;
    }
    2.0 * PI * w as f64 / (n as f64 * geom.spacing)
}

/// One-dimensional kernels `(1/N) Σ_w e^{ikδ} f(k)` of the kinetic symbol and its square, for every offset `δ`.
///
/// The kinetic symbol vanishes at the Nyquist frequency `w = N/2`: keeping `k = π/a` there would
/// pair an unpaired real mode with its own mirror and break the particle-hole symmetry of `H`.
fn spectral_kernels(geom: &TorusGeometry) -> (Vec<c64>, Vec<c64>) {
    let n = geom.sites_per_dim;
    let mut first = vec![ZERO; n];
    let mut second = vec![ZERO; n];
    for w in 0..n {
        let k = if w == n / 2 { 0.0 } else { momentum(geom, w) };
        for (delta, (f, s)) in first.iter_mut().zip(second.iter_mut()).enumerate() {
            let phase = c64::from_polar(1.0 / n as f64, 2.0 * PI * (w * delta) as f64 / n as f64);
            *f += phase * k;
            *s += phase * (k * k);
        }
    }
    (first, second)
}

/// Fills a translation-invariant operator from its kernel: `X(x, y) = K(x − y)` blockwise.
fn translation_invariant(geom: &TorusGeometry, block: usize, kernel: impl Fn(&[usize]) -> Option<CMat>) -> CMat {
    let sites = geom.num_sites();
    let n = geom.sites_per_dim;
    let mut out = linalg::zeros(sites * block, sites * block);
    let kernels: Vec<Option<CMat>> = (0..sites).map(|off| kernel(&geom.coords(off))).collect();
    for x in 0..sites {
        let cx = geom.coords(x);
        for y in 0..sites {
            let cy = geom.coords(y);
            let offset: Vec<usize> = cx.iter().zip(&cy).map(|(&a, &b)| (a + n - b) % n).collect();
            if let Some(k) = &kernels[geom.site_index(&offset)] {
                for j in 0..block {
                    for i in 0..block {
                        out[(x * block + i, y * block + j)] = k[(i, j)];
                    }
                }
            }
        }
    }
    out
}

/// Spectral-backend Dirac operator with the default size cap.
pub fn build_dirac_spectral(geom: &TorusGeometry, rep: &GammaRep) -> Result<DiracOperator> {
    build_dirac_spectral_capped(geom, rep, DEFAULT_SIZE_CAP)
}

/// `H = γ⁰(γ·k + m)` in momentum space, `L = |k|² + m²`, both transformed to position space.
pub fn build_dirac_spectral_capped(geom: &TorusGeometry, rep: &GammaRep, cap: usize) -> Result<DiracOperator> {
    check_rep(geom, rep, cap)?;
    let nspin = rep.spinor_size();
    let p = geom.spatial_dim;
    let m = geom.mass;
    let (first, second) = spectral_kernels(geom);
    let g0 = rep.gamma(0);
    let alphas: Vec<CMat> = (1..=p).map(|j| g0 * rep.gamma(j)).collect();

    // Nonzero kernel entries only at offsets along a single axis.
    let h = translation_invariant(geom, nspin, |off| {
        let nonzero: Vec<usize> = (0..p).filter(|&j| off[j] != 0).collect();
        match nonzero.as_slice() {
            [] => {
                let mut k = linalg::scale(g0, c64::new(m, 0.0));
                for alpha in &alphas {
                    k += linalg::scale(alpha, first[0]);
                }
                Some(k)
            }
            [j] => Some(linalg::scale(&alphas[*j], first[off[*j]])),
            _ => None,
        }
    });
    let scalar = translation_invariant(geom, 1, |off| {
        let nonzero: Vec<usize> = (0..p).filter(|&j| off[j] != 0).collect();
        let value = match nonzero.as_slice() {
            [] => c64::new(m * m, 0.0) + second[0] * p as f64,
            [j] => second[off[*j]],
            _ => return None,
        };
        Some(Mat::from_fn(1, 1, |_, _| value))
    });
    let l = linalg::kron(&scalar, &linalg::identity(nspin));
    Ok(DiracOperator {
        h,
        l,
        backend: Backend::Spectral,
        geometry: geom.clone(),
        dimension: rep.dimension(),
        spinor_size: nspin,
    })
}

/// Wilson-backend Dirac operator with the default size cap.
pub fn build_dirac_wilson(geom: &TorusGeometry, rep: &GammaRep, r: f64) -> Result<DiracOperator> {
    build_dirac_wilson_capped(geom, rep, r, DEFAULT_SIZE_CAP)
}

/// `H = γ⁰(−iγʲ∇ᶜ_j + m − (ra/2)Δ)` with symbol `γ⁰(γʲ sin(k_j a)/a + m + (r/a)Σ(1 − cos k_j a))`.
///
/// The Wilson term carries the sign that gives the doubler at `k = π/a` the mass `m + 2r/a`.
/// `r = 0` is the naive discretization with doublers.
pub fn build_dirac_wilson_capped(geom: &TorusGeometry, rep: &GammaRep, r: f64, cap: usize) -> Result<DiracOperator> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidWilsonParameter(r));
    }
    let dim = check_rep(geom, rep, cap)?;
    let nspin = rep.spinor_size();
    let p = geom.spatial_dim;
    let a = geom.spacing;
    let g0 = rep.gamma(0);
    let onsite = linalg::scale(g0, c64::new(geom.mass + r * p as f64 / a, 0.0));
    // Block coupling site x to x + e_j, and its mirror coupling x to x − e_j.
    let hops: Vec<(CMat, CMat)> = (1..=p)
        .map(|j| {
            let g0gj = g0 * rep.gamma(j);
            let forward = &linalg::scale(&g0gj, -I / (2.0 * a)) - &linalg::scale(g0, c64::new(r / (2.0 * a), 0.0));
            let backward = &linalg::scale(&g0gj, I / (2.0 * a)) - &linalg::scale(g0, c64::new(r / (2.0 * a), 0.0));
            (forward, backward)
        })
        .collect();

    let mut h = linalg::zeros(dim, dim);
    let place = |h: &mut CMat, x: usize, y: usize, block: &CMat| {
        for j in 0..nspin {
            for i in 0..nspin {
                h[(x * nspin + i, y * nspin + j)] += block[(i, j)];
            }
        }
    };
    for x in 0..geom.num_sites() {
        place(&mut h, x, x, &onsite);
        for (axis, (forward, backward)) in hops.iter().enumerate() {
            place(&mut h, x, geom.shift(x, axis, 1), forward);
            place(&mut h, x, geom.shift(x, axis, -1), backward);
        }
    }
    let flat = geom.clone().with_curvature(Curvature::Constant(0.0))?;
    let l = linalg::kron(&scalar_operator(&flat), &linalg::identity(nspin));
    Ok(DiracOperator {
        h,
        l,
        backend: Backend::Wilson { r },
        geometry: geom.clone(),
        dimension: rep.dimension(),
        spinor_size: nspin,
    })
}

fn scalar_operator(geom: &TorusGeometry) -> CMat {
    let sites = geom.num_sites();
    let a2 = geom.spacing * geom.spacing;
    let m2 = geom.mass * geom.mass;
    let mut l = linalg::zeros(sites, sites);
    for x in 0..sites {
        l[(x, x)] += c64::new(2.0 * geom.spatial_dim as f64 / a2 + m2 + geom.curvature_at(x) / 4.0, 0.0);
        for axis in 0..geom.spatial_dim {
            for step in [-1, 1] {
                l[(x, geom.shift(x, axis, step))] -= c64::new(1.0 / a2, 0.0);
            }
        }
    }
    l
}

/// `L = −Δ + m² + R(x)/4` on scalar fields, with the nearest-neighbour Laplacian.
pub fn build_scalar_lichnerowicz(geom: &TorusGeometry) -> Result<CMat> {
    geom.effective_mass()?;
    Ok(scalar_operator(geom))
}

/// `max |X(τx, τy) − X(x, y)|` for the unit translation `τ` along `axis`.
pub fn translation_residual(geom: &TorusGeometry, x: &CMat, block: usize, axis: usize) -> f64 {
    let sites = geom.num_sites();
    let perm: Vec<usize> = (0..sites * block).map(|i| geom.shift(i / block, axis, 1) * block + i % block).collect();
    let mut worst = 0.0f64;
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            worst = worst.max((x[(perm[i], perm[j])] - x[(i, j)]).norm());
        }
    }
    worst
}

/// Cutoff functions around a pair of regions, sampled on sites.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFamily {
    pub chi_check: Vec<f64>,
    pub chi_hat: Vec<f64>,
    pub chi: Vec<f64>,
    pub epsilon: f64,
}

/// Quintic smoothstep on `[0, 1]`, clamped outside.
pub fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
}

/// `χ̌ = 1` on `A` and supported within `ε` of it; `χ = 1` on `supp χ̌` and supported within `2ε`;
/// `1 − χ̂` is the indicator of `B`.
pub fn build_cutoffs(geom: &TorusGeometry, a: &Region, b: &Region, epsilon: f64) -> Result<CutoffFamily> {
    let d = region_distance(geom, a, b)?;
    if !(epsilon >= 0.0 && d > 4.0 * epsilon) {
        return Err(Error::MarginTooLarge { epsilon, distance: d });
    }
    let width = epsilon + geom.spacing;
    let t = distance_field(geom, a);
    let chi_check = t.iter().map(|&t| if t <= epsilon { smoothstep(1.0 - t / width) } else { 0.0 }).collect();
    let chi = t
        .iter()
        .map(|&t| match t {
            t if t <= epsilon => 1.0,
            t if t <= 2.0 * epsilon => smoothstep(1.0 - (t - epsilon) / width),
            _ => 0.0,
        })
        .collect();
    let chi_hat = (0..geom.num_sites()).map(|x| if b.contains(x) { 0.0 } else { 1.0 }).collect();
    Ok(CutoffFamily { chi_check, chi_hat, chi, epsilon })
}

/// Real diagonal matrix with the given entries.
pub fn diagonal_matrix(values: &[f64]) -> CMat {
    Mat::from_fn(values.len(), values.len(), |i, j| if i == j { c64::new(values[i], 0.0) } else { ZERO })
}

/// Sitewise copy of an `n × n` matrix: `1_sites ⊗ block`.
pub fn sitewise(geom: &TorusGeometry, block: &CMat) -> CMat {
    linalg::kron(&linalg::identity(geom.num_sites()), block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_gamma_rep, solve_charge_conjugation};

    fn chain(n: usize, m: f64) -> TorusGeometry {
        TorusGeometry::new(1, n, 1.0, m).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn spectral_eigenvalues_n4() {
        let geom = chain(4, 1.0);
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_spectral(&geom, &rep).unwrap();
        let vals = linalg::eigenvalues_hermitian(&dirac.h).unwrap();
        // Momenta ±π/2 carry energy √(π²/4 + 1); the zero and Nyquist modes carry the bare mass.
        let e = (PI * PI / 4.0 + 1.0).sqrt();
        let mut expected = Vec::new();
        for s in [-1.0, 1.0] {
            expected.extend([s * e; 4]);
            expected.extend([s; 4]);
        }
        for (x, y) in vals.iter().zip(sorted(expected)) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn zero_momentum_block_is_mass_term() {
        let geom = chain(4, 0.7);
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_spectral(&geom, &rep).unwrap();
        // Averaging H over all site pairs projects onto k = 0.
        let mut block = linalg::zeros(4, 4);
        for x in 0..4 {
            for y in 0..4 {
                block += linalg::select(
                    &dirac.h,
                    &[x * 4, x * 4 + 1, x * 4 + 2, x * 4 + 3],
                    &[y * 4, y * 4 + 1, y * 4 + 2, y * 4 + 3],
                );
            }
        }
        let block = linalg::scale(&block, c64::new(0.25, 0.0));
        assert!(linalg::distance(&block, &linalg::scale(rep.gamma(0), c64::new(0.7, 0.0))) < 1e-14);
        let vals = linalg::eigenvalues_hermitian(&block).unwrap();
        assert!((vals[0] + 0.7).abs() < 1e-14 && (vals[3] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn spectral_square_is_lichnerowicz() {
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_spectral(&chain(16, 0.5), &rep).unwrap();
        assert!(dirac.lichnerowicz_residual() < 1e-10);
        assert!(linalg::hermitian_residual(&dirac.h) < 1e-14);
        let geom2 = TorusGeometry::new(2, 4, 1.0, 0.5).unwrap();
        assert!(build_dirac_spectral(&geom2, &rep).unwrap().lichnerowicz_residual() < 1e-10);
    }

    #[test]
    fn spectral_gap_is_mass_and_spectrum_is_symmetric() {
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_spectral(&chain(12, 0.3), &rep).unwrap();
        let vals = linalg::eigenvalues_hermitian(&dirac.h).unwrap();
        let gap = vals.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        assert!((gap - 0.3).abs() < 1e-10);
        for (x, y) in vals.iter().zip(vals.iter().rev()) {
            assert!((x + y).abs() < 1e-10);
        }
    }

    #[test]
    fn mass_term_is_majorana_odd_iff_epsilon_negative() {
        // The kinetic term is always Γ-odd; γ⁰m is Γ-odd only when ε = −1.
        for (d, odd) in [(4, true), (10, true), (8, false), (9, false)] {
            let rep = build_gamma_rep(d).unwrap();
            let iset = solve_charge_conjugation(&rep).unwrap();
            let geom = chain(4, 1.0);
            let dirac = build_dirac_spectral(&geom, &rep).unwrap();
            let gamma = iset.majorana().sitewise(geom.num_sites());
            let residual =
                linalg::distance(&gamma.conjugate_operator(&dirac.h), &linalg::scale(&dirac.h, -crate::linalg::ONE));
            assert_eq!(residual < 1e-10, odd, "D={d} residual {residual}");
        }
    }

    #[test]
    fn spectral_rejects_too_few_gammas() {
        let rep = build_gamma_rep(2).unwrap();
        let geom = TorusGeometry::new(2, 4, 1.0, 1.0).unwrap();
        assert!(matches!(build_dirac_spectral(&geom, &rep), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn size_cap_is_enforced() {
        let rep = build_gamma_rep(4).unwrap();
        let err = build_dirac_spectral_capped(&chain(64, 1.0), &rep, 100).unwrap_err();
        assert_eq!(err, Error::SizeOverflow { size: 256, cap: 100 });
    }

    /// Eigenvalues of a Hermitian Wilson symbol at momentum k for p = 1: ±√(sin²k + (m + r(1 − cos k))²).
    fn wilson_energy(k: f64, m: f64, r: f64) -> f64 {
        (k.sin().powi(2) + (m + r * (1.0 - k.cos())).powi(2)).sqrt()
    }

    #[test]
    fn wilson_dispersion_matches_oracle() {
        let rep = build_gamma_rep(4).unwrap();
        for r in [0.0, 0.5, 1.0] {
            let n = 8;
            let dirac = build_dirac_wilson(&chain(n, 0.4), &rep, r).unwrap();
            let vals = linalg::eigenvalues_hermitian(&dirac.h).unwrap();
            let mut expected = Vec::new();
            for w in 0..n {
                let e = wilson_energy(2.0 * PI * w as f64 / n as f64, 0.4, r);
                expected.extend([e, e, -e, -e]);
            }
            for (x, y) in vals.iter().zip(sorted(expected)) {
                assert!((x - y).abs() < 1e-12, "r={r}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn naive_operator_has_doubler() {
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_wilson(&chain(8, 0.4), &rep, 0.0).unwrap();
        let vals = linalg::eigenvalues_hermitian(&dirac.h).unwrap();
        let at_mass = vals.iter().filter(|x| (x.abs() - 0.4).abs() < 1e-12).count();
        // k = 0 and k = π each contribute ±m twice.
        assert_eq!(at_mass, 8);
        assert!((wilson_energy(PI, 0.4, 1.0) - 2.4).abs() < 1e-14);
    }

    #[test]
    fn wilson_is_nearest_neighbour() {
        let geom = TorusGeometry::new(2, 6, 1.0, 0.5).unwrap();
        let rep = build_gamma_rep(4).unwrap();
        let dirac = build_dirac_wilson(&geom, &rep, 1.0).unwrap();
        for x in 0..geom.num_sites() {
            for y in 0..geom.num_sites() {
                if torus_distance(&geom, x, y) > 1.0 + 1e-12 {
                    let block = linalg::select(&dirac.h, &[x * 4, x * 4 + 3], &[y * 4, y * 4 + 3]);
                    assert_eq!(linalg::max_abs(&block), 0.0);
                }
            }
        }
        let vals = linalg::eigenvalues_hermitian(&dirac.h).unwrap();
        let gap = vals.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        assert!((0.5 - 1e-12..=0.5 + 4.0).contains(&gap));
    }

    #[test]
    fn wilson_rejects_bad_r() {
        let rep = build_gamma_rep(4).unwrap();
        assert_eq!(build_dirac_wilson(&chain(8, 1.0), &rep, 1.5).unwrap_err(), Error::InvalidWilsonParameter(1.5));
    }

    #[test]
    fn scalar_lichnerowicz_circulant_spectrum() {
        let l = build_scalar_lichnerowicz(&chain(8, 1.0)).unwrap();
        let vals = linalg::eigenvalues_hermitian(&l).unwrap();
        let expected = sorted((0..8).map(|w| 2.0 - 2.0 * (2.0 * PI * w as f64 / 8.0).cos() + 1.0).collect());
        for (x, y) in vals.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_curvature_shifts_spectrum() {
        let flat = build_scalar_lichnerowicz(&chain(8, 1.0)).unwrap();
        let curved =
            build_scalar_lichnerowicz(&chain(8, 1.0).with_curvature(Curvature::Constant(4.0)).unwrap()).unwrap();
        let (a, b) = (linalg::eigenvalues_hermitian(&flat).unwrap(), linalg::eigenvalues_hermitian(&curved).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((y - x - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn positivity_violation() {
        let mut r = vec![0.0; 8];
        r[3] = -4.0;
        let geom = chain(8, 1.0).with_curvature(Curvature::PerSite(r)).unwrap();
        assert!(matches!(build_scalar_lichnerowicz(&geom), Err(Error::PositivityViolation(_))));
    }

    #[test]
    fn geometry_validation() {
        assert!(TorusGeometry::new(1, 7, 1.0, 1.0).is_err());
        assert!(TorusGeometry::new(4, 8, 1.0, 1.0).is_err());
        assert!(TorusGeometry::new(1, 8, 1.0, 0.0).is_err());
        assert!(chain(8, 1.0).with_curvature(Curvature::PerSite(vec![0.0; 3])).is_err());
    }

    #[test]
    fn distances() {
        let geom = chain(10, 1.0);
        assert_eq!(torus_distance(&geom, 4, 4), 0.0);
        assert_eq!(torus_distance(&geom, 0, 7), 3.0);
        let sq = TorusGeometry::new(2, 6, 1.0, 1.0).unwrap();
        let d = torus_distance(&sq, sq.site_index(&[0, 0]), sq.site_index(&[1, 1]));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn region_distance_counts_gap() {
        let geom = chain(32, 1.0);
        let a = Region::interval(&geom, 0, 4).unwrap();
        let b = Region::interval(&geom, 4 + 3, 4).unwrap();
        assert_eq!(region_distance(&geom, &a, &b).unwrap(), 4.0);
        assert_eq!(region_distance(&geom, &a, &Region::empty()).unwrap_err(), Error::EmptyRegion);
        assert_eq!(region_distance(&geom, &a, &a).unwrap_err(), Error::RegionOverlap);
    }

    #[test]
    fn projectors() {
        let geom = chain(8, 1.0);
        let full = region_projector(&geom, &Region::full(&geom), 4);
        assert!(linalg::distance(&full.matrix(), &linalg::identity(32)) == 0.0);
        let a = region_projector(&geom, &Region::interval(&geom, 0, 3).unwrap(), 4);
        let b = region_projector(&geom, &Region::interval(&geom, 5, 2).unwrap(), 4);
        assert_eq!(linalg::max_abs(&(&a.matrix() * &b.matrix())), 0.0);
        let p = a.matrix();
        assert_eq!(linalg::distance(&(&p * &p), &p), 0.0);
    }

    #[test]
    fn region_block_wraps() {
        let geom = TorusGeometry::new(2, 4, 1.0, 1.0).unwrap();
        let b = Region::block(&geom, &[3, 0], &[2, 2]).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.contains(geom.site_index(&[0, 1])));
        assert_eq!(b.complement(&geom).len(), 12);
        assert!(Region::new(&geom, [16]).is_err());
    }

    #[test]
    fn cutoff_invariants() {
        let geom = chain(64, 1.0);
        let a = Region::interval(&geom, 0, 6).unwrap();
        let b = Region::interval(&geom, 30, 6).unwrap();
        let c = build_cutoffs(&geom, &a, &b, 3.0).unwrap();
        for &s in a.sites() {
            assert_eq!(c.chi_check[s], 1.0);
        }
        for &s in b.sites() {
            assert_eq!(1.0 - c.chi_hat[s], 1.0);
        }
        for x in 0..64 {
            assert_eq!((1.0 - c.chi_hat[x]) * c.chi[x], 0.0);
            if c.chi_check[x] > 0.0 {
                assert_eq!(c.chi[x], 1.0);
            }
        }
        let t = distance_field(&geom, &b);
        let gap = |f: &[f64]| (0..64).filter(|&x| f[x] > 0.0).map(|x| t[x]).fold(f64::INFINITY, f64::min);
        let d = region_distance(&geom, &a, &b).unwrap();
        assert_eq!(gap(&c.chi_check), d - 3.0);
        assert_eq!(gap(&c.chi), d - 6.0);
        assert!(matches!(build_cutoffs(&geom, &a, &b, 7.0), Err(Error::MarginTooLarge { .. })));
    }

    #[test]
    fn operators_commute_with_translations() {
        let geom = chain(8, 0.6);
        let rep = build_gamma_rep(4).unwrap();
        let spectral = build_dirac_spectral(&geom, &rep).unwrap();
        let wilson = build_dirac_wilson(&geom, &rep, 1.0).unwrap();
        assert!(translation_residual(&geom, &spectral.h, 4, 0) < 1e-10);
        assert!(translation_residual(&geom, &wilson.h, 4, 0) < 1e-10);
        assert!(translation_residual(&geom, &build_scalar_lichnerowicz(&geom).unwrap(), 1, 0) < 1e-10);
    }
}
