use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the guard {limit} for {what}")]
    DimensionExceedsGuard {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("{what} requires n >= {min}, got {n}")]
    DimensionTooSmall {
        what: &'static str,
        n: usize,
        min: usize,
    },
    #[error("matrix data has length {len}, expected {expected}")]
    ShapeMismatch { len: usize, expected: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported distribution kind `{0}`")]
    UnsupportedDistribution(String),
    #[error("work budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("interpolation residual {residual:e} above threshold {threshold:e}")]
    InterpolationConditioning { residual: f64, threshold: f64 },
    #[error("constant coefficient must be exactly 1, got {0}")]
    NotNormalized(Complex64),
    #[error("root {root} lies on the integration path")]
    RootOnPath { root: Complex64 },
    #[error("root {root} lies on the circle |z| = {radius}")]
    RootOnCircle { root: Complex64, radius: f64 },
    #[error("root finder did not converge (best scaled residual {best_residual:e})")]
    NoConvergence { best_residual: f64 },
    #[error("moment formula outside its validity domain: alpha = {alpha} >= 1")]
    AlphaOutOfRange { alpha: f64 },
    #[error("tilt function not evaluable at u = {u}")]
    TiltUnavailable { u: Complex64 },
    #[error("partition function vanishes along the continuation path")]
    ZeroOnPath,
    #[error("evaluation point is a zero of the permanent")]
    ZeroPermanent,
    #[error("spanning tree determinant {value} is not within rounding tolerance of an integer")]
    RoundingResidual { value: f64 },
    #[error("truncation tail bound {tail:e} above tolerance {tolerance:e}")]
    TailTooLarge { tail: f64, tolerance: f64 },
    #[error("graph error: {0}")]
    Graph(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
