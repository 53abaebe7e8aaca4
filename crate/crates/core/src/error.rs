use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("coefficient mismatch: {0} vs {1}")]
    CoefficientMismatch(f64, f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("spectrum truncated: {0}")]
    Truncated(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid conformal factor: {0}")]
    InvalidConformalFactor(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("coefficient {got} not allowed here: {why}")]
    Coefficient { got: f64, why: String },
    #[error("solver failed after {iterations} iterations (best residual {best_residual:e})")]
    SolverFailure {
        iterations: usize,
        best_residual: f64,
        residuals: Vec<f64>,
    },
    #[error("singular factorization: {0}")]
    Singular(String),
    #[error("scalar curvature below S0 = {s0} (min {min})")]
    ScalBelowS0 { s0: f64, min: f64 },
    #[error("Rayleigh quotient {rayleigh} exceeds Lambda^2 = {lambda_sq}")]
    RayleighExceeds { rayleigh: f64, lambda_sq: f64 },
    #[error("disconnected model: {0}")]
    Disconnected(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("singular profile: {0}")]
    SingularProfile(String),
    #[error("geometry out of range: {0}")]
    OutOfRange(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("normalization: {0}")]
    Normalization(String),
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(String),
    #[error("inexact part: {0}")]
    Inexact(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
