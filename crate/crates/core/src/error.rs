use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero is not a valid input to {0}")]
    ZeroInput(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("set contains 0, which makes {0} undefined")]
    ZeroInSet(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    IndexOutOfRange { index: usize, vertex_count: usize },

    #[error("graph contains a loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("value collision: {0}")]
    Collision(String),

    #[error("retry budget of {attempts} exhausted choosing zeta; last collision: {constraint}")]
    RetryBudget { attempts: u32, constraint: String },

    #[error("no crossover: both bounds have m-exponent {0}")]
    NoCrossover(String),

    #[error("malformed {what} at line {line}: {reason}")]
    Format { what: &'static str, line: usize, reason: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
