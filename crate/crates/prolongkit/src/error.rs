//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("monomial #{index}: {reason}")]
    NotHomogeneousCubic { index: usize, reason: String },

    #[error("cubic form is identically zero")]
    ZeroForm,

    #[error("endomorphism is not in the span of the algebra basis")]
    NotInAlgebra,

    #[error("map is not a prolongation of the symmetry algebra: {0}")]
    NotProlongation(String),

    #[error("matrix does not preserve the cubic up to a scalar")]
    NotAutomorphism,

    #[error("dimension {dim} exceeds the one-stage solver cap {cap}")]
    SizeLimit { dim: usize, cap: usize },

    #[error("zero vector not allowed here")]
    ZeroVector,

    #[error("sample does not lie on the cubic cone")]
    SampleNotOnY,

    #[error("sample is a singular point of the cubic")]
    SampleSingular,

    #[error("point is not a singular point of the cubic")]
    NotSingular,

    #[error("subspace basis is linearly dependent")]
    DependentBasis,

    #[error("empty sample list")]
    EmptySampleList,

    #[error("sampler gave up after {0} retries")]
    RetryExhausted(usize),

    #[error("unknown catalog name `{0}` (expected veronese | segre | grassmannian | octonion)")]
    UnknownName(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
