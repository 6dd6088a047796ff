use alloc::string::String;

/// Failure modes shared across the engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator kind mismatch")]
    KindMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator index {index} exceeds dimension {dim}")]
    GeneratorOutOfRange { index: usize, dim: usize },
    #[error("parameter `{name}`: {msg}")]
    Parameter { name: String, msg: String },
    #[error("rule `{rule}` has a pole at the requested point")]
    Pole { rule: String },
    #[error("rule `{rule}` cannot be evaluated in this ring")]
    NotRepresentable { rule: String },
    #[error("reduction step limit of {limit} exceeded")]
    StepLimitExceeded { limit: u64 },
    #[error("invalid deformation table: {0}")]
    InvalidTable(String),
    #[error("q-multinomial denominator vanishes: q is a root of unity of order {order}")]
    PoleAtRootOfUnity { order: u32 },
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("symmetrization map is not invertible here: {0}")]
    SigmaNotInvertible(String),
    #[error("division by a non-invertible scalar")]
    NotInvertible,
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("invalid state data: {0}")]
    InvalidState(String),
    #[error("invalid norm parameters: {0}")]
    InvalidNorm(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
