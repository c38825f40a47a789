use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-integral exponent: {0}")]
    Exponent(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("generator kind not allowed: {0}")]
    Kind(String),
    #[error("no rewrite rule: {0}")]
    UnsupportedRule(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot expand: {0}")]
    Expansion(String),
    #[error("index out of range: {0}")]
    Index(String),
    /// `line == 0` marks an error without a source position.
    #[error("parse error{}: {msg}", if *line == 0 { String::new() } else { format!(" at line {line}, column {col}") })]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
