use thiserror::Error;

/// Errors raised by the algebroid toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("undefined root set: polynomial is identically zero")]
    ZeroPolynomial,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("all coefficients are identically zero")]
    ZeroEquation,
    #[error("discriminant undefined for a single-valued equation")]
    DiscriminantUndefined,
    #[error("equation is not squarefree in W (repeated factor present)")]
    NotSquarefree,
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("map has a pole along the curve")]
    PoleAlongCurve,
    #[error("target equals the function")]
    TargetEqualsFunction,
    #[error("inversion of a function with an identically zero branch")]
    ZeroBranch,
    #[error("path too close to a critical point: {0}")]
    PathTooClose(String),
    #[error("derivative undefined at ramification point {0}")]
    Ramification(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("critical point on the circle |z| = {0}; perturb r")]
    PerturbRadius(f64),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("duplicate targets at positions {0} and {1}")]
    DuplicateTargets(usize, usize),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
