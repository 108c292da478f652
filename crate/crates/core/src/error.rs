use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ambient variable count mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("variable index x{index} out of range 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ideal is not squarefree: generator {0} has an exponent above 1")]
    NotSquarefree(String),

    #[error("{n} variables exceeds the poset limit of {max}")]
    TooManyVariables { n: usize, max: usize },

    #[error(
        "ideal containment fails: generator {0} of the smaller ideal is not in the larger one"
    )]
    NotContained(String),

    #[error("{context} requires a proper nonzero ideal")]
    DegenerateIdeal { context: &'static str },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("element {element} does not belong to the poset")]
    NotAMember { element: String },

    #[error("oracle guard: poset has {size} members, limit is {limit}")]
    OracleGuard { size: usize, limit: usize },

    #[error("certificate format: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
