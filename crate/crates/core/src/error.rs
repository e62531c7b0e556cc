use thiserror::Error;

/// Every failure the laboratory can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spacetime dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),
    #[error("no nonzero charge-conjugation intertwiner exists in dimension {0}")]
    NoSolution(usize),
    #[error("conj(C)C is not a positive multiple of the identity in dimension {dim} (normalization {value})")]
    NormalizationFailure { dim: usize, value: f64 },
    #[error("time reversal is not supported in dimension {0} (D mod 8 = {m})", m = .0 % 8)]
    DimensionUnsupported(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator size {size} exceeds the configured cap {cap}")]
    SizeOverflow { size: usize, cap: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("inf(m^2 + R/4) = {0} is not positive")]
    PositivityViolation(f64),
    #[error("region is empty")]
    EmptyRegion,
    #[error("regions overlap")]
    RegionOverlap,
    #[error("region is not nested inside the enclosing region with a positive margin")]
    RegionNotNested,
    #[error("site index {0} is outside the lattice")]
    SiteOutOfRange(usize),
    #[error("cutoff margin {epsilon} too large for region distance {distance} (need distance > 4 epsilon)")]
    MarginTooLarge { epsilon: f64, distance: f64 },
    #[error("Wilson parameter r = {0} outside [0, 1]")]
    InvalidWilsonParameter(f64),
    #[error("spectrum has an eigenvalue of magnitude {0:e} inside the gap tolerance")]
    GaplessSpectrum(f64),
    #[error("vector is not invariant under Majorana conjugation (residual {0:e})")]
    NotGammaReal(f64),
    #[error("modular exponent {0} outside the admissible range")]
    InvalidExponent(f64),
    #[error("symbol is not pure (residual of Sigma^2 - 1 is {0:e})")]
    NotPure(f64),
    #[error("cut operator has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),
    #[error("eigenvalue {0} of the restricted two-point function is outside [0, 1]")]
    EigenvalueOutOfRange(f64),
    #[error("decay fit needs at least {needed} usable points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("every value in the decay fit is zero")]
    AllZeroValues,
    #[error("separations must be strictly increasing")]
    UnsortedSeparations,
    #[error("eigendecomposition failed to converge")]
    Convergence,
    #[error("malformed symbol dump: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
