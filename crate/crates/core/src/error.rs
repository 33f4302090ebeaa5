use thiserror::Error;

/// Failures of module preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("theta mismatch: {left} vs {right}")]
    ThetaMismatch { left: String, right: String },

    #[error("matrix [[{a}, {b}], [{c}, {d}]] is not unimodular (det = {det})")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64, det: i64 },

    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("resonant phase: sin({p}*{q}*theta) = {sine:e}, the 2x2 system is singular")]
    ResonantPhase { p: i64, q: i64, sine: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("sigma not inner for twisted representation (twist = ({phi1}, {phi2}))")]
    TwistedParity { phi1: f64, phi2: f64 },

    #[error("lambda not grid-aligned: {0}")]
    GridMisaligned(String),

    #[error("potential is not harmonic")]
    NotHarmonic,

    #[error("dimension {dim} exceeds the dense solver limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
