use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected {expected} Pauli letters, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("illegal character {ch:?} at position {position}")]
    IllegalCharacter { ch: char, position: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("generators {0:?} are linearly dependent")]
    Dependent(Vec<usize>),

    #[error("the generated group contains -I")]
    MinusIdentity,

    #[error("enumeration cap exceeded: {what} = {value} > {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("operator {0} is not in the centralizer of the stabilizer group")]
    NotInCentralizer(String),

    #[error("unknown catalog code {0:?}")]
    UnknownCode(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("code validation failed: {0}")]
    Validation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("schema violation: {field}: {message}")]
    Schema { field: String, message: String },

    #[error("invalid qubit subset {subset:?} for n = {n}")]
    InvalidSubset { subset: Vec<usize>, n: usize },

    #[error("subset {0:?} does not leave equal reduced states")]
    NotUndetermined(Vec<usize>),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
