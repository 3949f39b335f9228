use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("spectrum does not invert to a ±1-valued function")]
    NotBoolean,
    #[error("parity masks are linearly dependent over GF(2)")]
    DependentMasks,
    #[error("{what}: arity {n} exceeds the guard {max}")]
    SizeGuard { what: &'static str, n: usize, max: usize },
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("bound undefined: {0}")]
    Undefined(String),
    #[error("no threshold with dim(S_t) > 1")]
    NoValidThreshold,
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
