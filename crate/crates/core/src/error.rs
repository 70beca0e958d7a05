use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("polynomial is empty (all terms cancelled)")]
    EmptyPolynomial,
    #[error("variable index {index} exceeds declared variable count {n}")]
    DimensionMismatch { index: usize, n: usize },
    #[error("coefficient models (rational-complex vs exp-form) cannot mix in one polynomial")]
    MixedCoefficientModel,
    #[error("duplicate exponents cannot be merged exactly under exp-form coefficients")]
    LogPolarMerge,
    #[error("zero coefficient or scale factor")]
    ZeroScale,
    #[error("operation requires a univariate polynomial")]
    NotUnivariate,
    #[error("polynomial has a single term; tropical set is empty")]
    SinglePoint,
    #[error("sign test exhausted the precision cap and no exact fallback applies")]
    PrecisionExhausted,
    #[error("query model does not match the polynomial's coefficient model")]
    ModelMismatch,
    #[error("query point must be strictly positive")]
    NonpositiveQuery,
    #[error("tropical set is empty")]
    EmptyTropicalSet,
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("invalid arity: need at least dim+1 terms")]
    InvalidArity,
    #[error("empty point set")]
    EmptySet,
    #[error("plot data requires a bivariate input")]
    NotPlanar,
    #[error("system must be square (k polynomials in k variables, k <= 3)")]
    BadSystemShape,
}

pub type Result<T> = std::result::Result<T, Error>;
