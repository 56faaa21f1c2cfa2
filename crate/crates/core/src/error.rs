use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ensemble specification: {0}")]
    InvalidSpec(String),
    #[error("invalid coefficient law: {0}")]
    InvalidLaw(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point {0} lies outside the truncation-validated region")]
    OutOfValidatedRegion(Complex64),
    #[error("series truncation diverges on the requested region")]
    DivergentRegion,
    #[error("every coefficient is zero")]
    DegenerateAllZero,
    #[error("root iteration did not converge ({0})")]
    NoConvergence(String),
    #[error("requested region is not covered by the root set")]
    RegionNotCovered,
    #[error("quadrature did not reach tolerance: estimate {value}, error {error:e}")]
    QuadratureFailure { value: f64, error: f64 },
    #[error("all trigonometric coefficients are zero")]
    AllZeroCoefficients,
    #[error("region has no finite area")]
    UnsupportedRegion,
    #[error("family not supported here: {0}")]
    UnsupportedFamily(String),
    #[error("test function arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: String, found: String },
    #[error("function vanishes on the whole sampling grid")]
    DegenerateZeroFunction,
    #[error("quadrature grid too coarse: refinements differ by {0:e}")]
    GridTooCoarse(f64),
    #[error("{failed} of {trials} trials failed, above the 1% budget")]
    FailureBudgetExceeded { failed: u64, trials: u64 },
    #[error("configuration error: {0}")]
    Config(String),
}
