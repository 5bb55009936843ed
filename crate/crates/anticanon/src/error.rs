//! Crate-wide error type. Every fallible operation returns one of these
//! variants; the CLI maps them to exit code 2 (usage / input errors) while
//! verification failures map to exit code 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("ideal generator is not homogeneous linear in z0..z4: {0}")]
    NonLinearGenerator(String),

    #[error("no generator variable has a constant coefficient, cannot pick a pivot in: {0}")]
    NoConstantPivot(String),

    #[error("quadric rewriting rule has a parameter-laden leading monomial: {0}")]
    UnorientableQuadric(String),

    #[error("polynomial is not a quadratic form in z0..z4: {0}")]
    NotQuadratic(String),

    #[error("random specializations disagree ({0} vs {1}), retry with a new seed")]
    SpecializationMismatch(usize, usize),

    #[error("generic samples disagree ({0:?}), retry with a new seed")]
    SampleMismatch(Vec<usize>),

    #[error("cycle must have at least four components, got {0}")]
    CycleTooShort(usize),

    #[error("invalid {kind} index {index} (current cycle has {len})")]
    BadIndex {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("divisor class error: {0}")]
    Class(String),

    #[error("fixed-part extraction did not terminate within {0} passes")]
    StripDiverged(usize),

    #[error("fan is not complete or not closed: {0}")]
    BadFan(String),

    #[error("restriction table error: {0}")]
    Table(String),

    #[error("branch data rejected: {0}")]
    Branch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
