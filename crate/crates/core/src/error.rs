use thiserror::Error;

use crate::problem::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rows of the generator matrix are linearly dependent")]
    DependentRows,

    #[error("{what} exceeds the search guard ({size} > {limit})")]
    TooLarge { what: &'static str, size: u128, limit: u128 },

    #[error("the set of kept message indices is empty")]
    EmptyKeepSet,

    #[error("invalid problem: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidProblem(Vec<Violation>),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("code distance too small: need at least {required}, code has {actual}")]
    DistanceTooSmall { required: usize, actual: usize },

    #[error("field of size {q} is too small for blocklength {n}")]
    FieldTooSmall { q: u32, n: usize },

    #[error("degenerate code: {0}")]
    DegenerateCode(String),

    #[error("syndrome not found in the decoding table (error weight exceeds delta_s)")]
    SyndromeNotFound,

    #[error("two error patterns share a syndrome; the encoder matrix is not valid")]
    DuplicateSyndrome,

    #[error("encoder matrix is not valid for this problem")]
    InvalidEncoder,
}

impl Error {
    pub(crate) fn too_large(what: &'static str, size: u128, limit: u128) -> Self {
        Error::TooLarge { what, size, limit }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
