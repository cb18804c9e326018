use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the model or operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Row and column degree sums disagree where a joint quantity was requested.
    #[error("degree sums differ: sum(s) = {row_sum}, sum(t) = {col_sum}")]
    SumMismatch { row_sum: u64, col_sum: u64 },

    /// A column asks for more rows than it may use.
    #[error("column {column} needs {demand} rows but only {available} are allowed")]
    InfeasibleColumn {
        column: usize,
        demand: u32,
        available: u32,
    },

    /// The requested shape exceeds what the exact or brute-force path supports.
    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate density: {0}")]
    Degenerate(String),

    /// Quadrature failed to reach its tolerance.
    #[error("numeric error: {message} (achieved relative error {achieved:e})")]
    Numeric { message: String, achieved: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Capacity(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
