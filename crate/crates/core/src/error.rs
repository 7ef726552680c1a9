use thiserror::Error;

/// Errors raised by the sampling toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sampling pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error(
        "sample window [{}, {}] does not cover the sampled support; required bounds [{}, {}]",
        given.0, given.1, required.0, required.1
    )]
    WindowCoverage {
        required: (i64, i64),
        given: (i64, i64),
    },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("regularity violated at omega = {omega}: {reason}")]
    RegularityViolation { omega: f64, reason: String },

    #[error("no density certificate: {0}")]
    NoCertificate(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
