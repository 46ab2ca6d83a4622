use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not an orthogonal projection (defect {0:.3e})")]
    NotProjection(f64),
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEps(f64),
    #[error("pair has no generic part")]
    NoGenericPart,
    #[error("no geodesic: dim(S ∩ T⊥) = {d10} differs from dim(S⊥ ∩ T) = {d01}")]
    NoGeodesic { d10: usize, d01: usize },
    #[error("projections are too far apart: ‖P - Q‖ = {0:.6}")]
    TooFar(f64),
    #[error("certificate failed verification: {0}")]
    CertificateFailed(String),
    #[error("need at least {needed} levels, got {got}")]
    InsufficientLevels { needed: usize, got: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("symbol has a pole on the unit circle")]
    PoleOnCircle,
    #[error("winding method `{0}` does not apply to this symbol")]
    MethodInapplicable(String),
    #[error("winding number is ill-conditioned: {0}")]
    WindingIllConditioned(String),
    #[error("symbol is not invertible on the circle (min modulus {0:.3e})")]
    NotInvertibleSymbol(f64),
    #[error("duplicate zeros in Blaschke sequence")]
    DuplicateZeros,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
