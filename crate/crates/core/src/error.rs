use thiserror::Error;

use crate::arith::FactorError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("surface failed validation: {0}")]
    Validation(String),
    #[error("line is not contained in the cubic: {0}")]
    Containment(String),
    #[error("points do not span a line: {0}")]
    Rank(String),
    #[error("quadrature tolerance not met: estimate {estimate:e}, error {error:e}, requested {requested:e}")]
    ToleranceNotMet { estimate: f64, error: f64, requested: f64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("config syntax error at line {line}, column {column}: {message}")]
    ConfigSyntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config error: {0}")]
    ConfigSemantic(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable kind, used in structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Representation(_) => "representation",
            Error::Precondition(_) => "precondition",
            Error::Validation(_) => "validation",
            Error::Containment(_) => "containment",
            Error::Rank(_) => "rank",
            Error::ToleranceNotMet { .. } => "tolerance-not-met",
            Error::Overflow(_) => "overflow",
            Error::Internal(_) => "internal",
            Error::Factor(_) => "factorisation",
            Error::ConfigSyntax { .. } => "config-syntax",
            Error::ConfigSemantic(_) => "config-semantic",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
