use thiserror::Error;

use crate::dsl::DslError;
use crate::systems::SystemKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not of superpotential form: {0}")]
    NoGauge(String),
    #[error("nested commutator left a non-polynomial residue: {0}")]
    NonPolynomialResidue(String),
    #[error("invalid quantum numbers for {system}: {reason}")]
    InvalidQuantumNumbers { system: SystemKind, reason: String },
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("level {level} out of range (allowed 0..={max})")]
    LevelOutOfRange { level: i64, max: u32 },
    #[error("Laguerre index {0} must exceed -1")]
    LaguerreIndex(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),
    #[error("point {0} lies outside the evaluation domain")]
    DomainError(f64),
    #[error("precision must be at least 53 bits, got {0}")]
    Precision(u32),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
