use thiserror::Error;

use crate::presentation::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator '{name}' at line {line}, column {column}")]
    UnknownGenerator { name: String, line: usize, column: usize },

    #[error("knot-group validation failed: {0}")]
    Validation(ValidationReport),

    #[error("invalid PD code: {0}")]
    InvalidPdCode(String),

    #[error("PD code describes a link with {0} components, expected a knot")]
    MultiComponent(usize),

    #[error("coset enumeration exceeded the limit of {0} cosets")]
    CosetLimitExceeded(usize),

    #[error("permutation representation is incompatible with the presentation: {0}")]
    IncompatiblePermRep(String),

    #[error("invalid subgroup specification: {0}")]
    InvalidSpec(String),

    #[error("word does not lie in the subgroup (it ends at coset {0})")]
    NotInSubgroup(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("longitude missing from knot data")]
    LongitudeMissing,

    #[error("finite quotient does not kill relator {0}")]
    RelatorNotKilled(usize),

    #[error("subgroup N is not normal in G")]
    NotNormal,

    #[error("subgroup N is not contained in U")]
    NotContainedInU,

    #[error("generator-image map is not an isomorphism: {0}")]
    NotIsomorphism(String),

    #[error("isomorphism does not preserve the conjugacy class of the meridian subgroup")]
    MeridianClassNotPreserved,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
