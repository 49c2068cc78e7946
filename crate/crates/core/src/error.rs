use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {left} cannot be combined with {right}")]
    ArityMismatch { left: String, right: String },

    #[error("arity underflow: cannot bend {requested} points off a boundary of {available}")]
    ArityUnderflow { requested: usize, available: usize },

    #[error("expansion cap exceeded: {what} needs {terms} terms (cap {cap})")]
    CapExceeded {
        what: String,
        terms: String,
        cap: usize,
    },

    #[error("rewrite produced {terms} terms, above the bound of {bound}")]
    TermBound { terms: usize, bound: usize },

    #[error("tensor with {entries} entries exceeds the guard of {guard}")]
    TensorGuard { entries: u128, guard: u128 },

    #[error("the enhanced category needs m >= 2, got {0}")]
    InvalidM(usize),

    #[error("morphisms over different m ({0} and {1})")]
    MismatchedM(usize, usize),

    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(s: &str) -> Self {
        Error::Parse(s.to_string())
    }

    pub(crate) fn arity(left: impl Into<String>, right: impl Into<String>) -> Self {
        Error::ArityMismatch {
            left: left.into(),
            right: right.into(),
        }
    }

    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
