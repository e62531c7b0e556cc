//! Experiment configuration: four TOML tables, unknown keys rejected.
//!
//! ```toml
//! [geometry]
//! spatial_dim = 1
//! sites_per_dim = 192
//! spacing = 1.0
//! mass = 0.5
//! curvature = { constant = 0.0 }
//!
//! [regions]
//! size_a = 8
//! size_b = 8
//! placement = "interval"
//! separations = [8.0, 12.0, 16.0]
//!
//! [run]
//! backend = "wilson"
//! observables = ["cut_norm", "mutual_info"]
//!
//! [output]
//! directory = "out"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clifford::build_gamma_rep;
use crate::lattice::{Curvature, TorusGeometry, DEFAULT_SIZE_CAP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    pub regions: RegionsConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub spatial_dim: usize,
    /// Sites per axis; must be even.
    pub sites_per_dim: usize,
    #[serde(default = "unit")]
    pub spacing: f64,
    pub mass: f64,
    #[serde(default)]
    pub curvature: Curvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// One site thick across the transverse axes.
    Interval,
    /// Cubes of side `size` sites.
    Box,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsConfig {
    /// Extent of `A` along the first axis, in sites.
    pub size_a: usize,
    pub size_b: usize,
    #[serde(default = "default_placement")]
    pub placement: Placement,
    /// Distances between `A` and `B` in length units, strictly increasing.
    pub separations: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Spectral,
    Wilson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    CutNorm,
    MutualInfo,
    AppendixNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_backend")]
    pub backend: BackendKind,
    #[serde(default = "unit")]
    pub wilson_r: f64,
    /// Spacetime dimension of the gamma representation.
    #[serde(default = "default_gamma_dimension")]
    pub gamma_dimension: usize,
    pub observables: Vec<Observable>,
    /// `(a, b)` pairs for `‖(1 − χ̂) L^a χ L^b‖`.
    #[serde(default)]
    pub appendix_exponents: Vec<[f64; 2]>,
    /// Cutoff margin; every separation must exceed `4ε`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_size_cap")]
    pub size_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Significant digits written for every number.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: default_directory(), formats: default_formats(), precision: default_precision() }
    }
}

fn unit() -> f64 {
    1.0
}
fn default_placement() -> Placement {
    Placement::Interval
}
fn default_backend() -> BackendKind {
    BackendKind::Wilson
}
fn default_gamma_dimension() -> usize {
    4
}
fn default_epsilon() -> f64 {
    0.5
}
fn default_size_cap() -> usize {
    DEFAULT_SIZE_CAP
}
fn default_directory() -> PathBuf {
    PathBuf::from("out")
}
fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}
fn default_precision() -> usize {
    17
}

/// A validation failure tied to a dotted config path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn issue(field: &str, message: impl Into<String>) -> ConfigIssue {
    ConfigIssue { field: field.to_string(), message: message.into() }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigIssue> {
        toml::from_str(text).map_err(|e| issue("config", e.message().to_string() + &span_hint(text, e.span())))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigIssue> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| issue("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Every structural problem at once; an empty list means the config can be run.
    pub fn issues(&self) -> Vec<ConfigIssue> {
        let mut out = Vec::new();
        let g = &self.geometry;
        let r = &self.regions;
        let run = &self.run;

        if !(1..=3).contains(&g.spatial_dim) {
            out.push(issue("geometry.spatial_dim", format!("must be 1, 2 or 3, got {}", g.spatial_dim)));
        }
        if g.sites_per_dim < 4 || !g.sites_per_dim.is_multiple_of(2) {
            out.push(issue("geometry.sites_per_dim", format!("must be even and at least 4, got {}", g.sites_per_dim)));
        }
        if !(g.spacing.is_finite() && g.spacing > 0.0) {
            out.push(issue("geometry.spacing", format!("must be positive, got {}", g.spacing)));
        }
        if !(g.mass.is_finite() && g.mass > 0.0) {
            out.push(issue("geometry.mass", format!("must be positive, got {}", g.mass)));
        }
        if out.is_empty() {
            if let Err(e) = self.geometry() {
                out.push(issue("geometry.curvature", e.to_string()));
            }
        }

        if r.size_a == 0 {
            out.push(issue("regions.size_a", "must be at least one site"));
        }
        if r.size_b == 0 {
            out.push(issue("regions.size_b", "must be at least one site"));
        }
        if r.placement == Placement::Box && r.size_a.max(r.size_b) > g.sites_per_dim {
            out.push(issue("regions.placement", "box side exceeds the lattice extent"));
        }
        out.extend(self.separation_issues());

        if run.observables.is_empty() {
            out.push(issue("run.observables", "at least one observable is required"));
        }
        let mut seen = run.observables.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            out.push(issue("run.observables", "observables must not repeat"));
        }
        if !(0.0..=1.0).contains(&run.wilson_r) {
            out.push(issue("run.wilson_r", format!("must lie in [0, 1], got {}", run.wilson_r)));
        }
        if run.gamma_dimension < g.spatial_dim + 1 || run.gamma_dimension > 12 {
            out.push(issue(
                "run.gamma_dimension",
                format!("must lie in [{}, 12], got {}", g.spatial_dim + 1, run.gamma_dimension),
            ));
        }
        let wants_appendix = run.observables.contains(&Observable::AppendixNorm);
        if wants_appendix && run.appendix_exponents.is_empty() {
            out.push(issue("run.appendix_exponents", "appendix_norm needs at least one (a, b) pair"));
        }
        if run.appendix_exponents.iter().flatten().any(|x| !x.is_finite()) {
            out.push(issue("run.appendix_exponents", "exponents must be finite"));
        }
        if !(run.epsilon.is_finite() && run.epsilon >= 0.0) {
            out.push(issue("run.epsilon", format!("must be non-negative, got {}", run.epsilon)));
        } else if wants_appendix {
            if let Some(&d) = r.separations.first() {
                if d <= 4.0 * run.epsilon {
                    out.push(issue(
                        "run.epsilon",
                        format!("separation {d} must exceed 4 epsilon = {}", 4.0 * run.epsilon),
                    ));
                }
            }
        }
        if let Some(size) = self.operator_size() {
            if size > run.size_cap {
                out.push(issue("run.size_cap", format!("operator size {size} exceeds the cap {}", run.size_cap)));
            }
        }

        let o = &self.output;
        if o.formats.is_empty() {
            out.push(issue("output.formats", "at least one format is required"));
        }
        if !(1..=17).contains(&o.precision) {
            out.push(issue("output.precision", format!("must lie in [1, 17], got {}", o.precision)));
        }
        out
    }

    fn separation_issues(&self) -> Vec<ConfigIssue> {
        const FIELD: &str = "regions.separations";
        let seps = &self.regions.separations;
        let a = self.geometry.spacing;
        if seps.is_empty() {
            return vec![issue(FIELD, "separation list is empty")];
        }
        if seps.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return vec![issue(FIELD, "separation list must be strictly increasing")];
        }
        let mut out = Vec::new();
        let n = self.geometry.sites_per_dim as f64;
        let (sa, sb) = (self.regions.size_a as f64, self.regions.size_b as f64);
        for &d in seps {
            let steps = d / a;
            if !(d.is_finite() && steps >= 1.0 - 1e-9 && (steps - steps.round()).abs() < 1e-9) {
                out.push(issue(FIELD, format!("separation {d} is not a positive multiple of the spacing {a}")));
                continue;
            }
            if d + (sa + sb) * a >= n * a {
                out.push(issue(
                    FIELD,
                    format!("separation {d} does not fit: d + |A| + |B| must be below N a = {}", n * a),
                ));
                continue;
            }
            // Going the other way round the torus must not be shorter.
            let back = (n - sa - sb + 2.0 - steps.round()) * a;
            if back < d {
                out.push(issue(
                    FIELD,
                    format!("separation {d} wraps around the torus (the other side is only {back} away)"),
                ));
            }
        }
        out
    }

    /// Largest separation whose minimum-image distance is still measured in the placement direction.
    pub fn max_separation(&self) -> f64 {
        let n = self.geometry.sites_per_dim as f64;
        (n - self.regions.size_a as f64 - self.regions.size_b as f64 + 2.0) * self.geometry.spacing / 2.0
    }

    /// Torus geometry with the configured curvature.
    pub fn geometry(&self) -> crate::Result<TorusGeometry> {
        let g = &self.geometry;
        TorusGeometry::new(g.spatial_dim, g.sites_per_dim, g.spacing, g.mass)?.with_curvature(g.curvature.clone())
    }

    /// `n · N^p`, the dimension of the spinor operators.
    pub fn operator_size(&self) -> Option<usize> {
        let spinor = build_gamma_rep(self.run.gamma_dimension).ok()?.spinor_size();
        let sites = self.geometry.sites_per_dim.checked_pow(self.geometry.spatial_dim as u32)?;
        sites.checked_mul(spinor)
    }

    /// Column name for an appendix exponent pair, e.g. `appnorm_-0.5_0`.
    pub fn appendix_column(pair: [f64; 2]) -> String {
        format!("appnorm_{}_{}", pair[0], pair[1])
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => {
            let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}
