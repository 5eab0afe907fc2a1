use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to point at
/// the offending field, index or loop.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("form is not skew-symmetric at {0}")]
    NotSkew(String),

    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("winding number unstable{}: {reason}", loop_label(.location))]
    WindingUnstable {
        /// `(k, i, j)`: generator loop and basis pair, when known.
        location: Option<(usize, usize, usize)>,
        reason: String,
    },

    #[error("noise amplitude {0} must be strictly below 1/8")]
    NoiseTooLarge(String),

    #[error("triple is not centrally non-degenerate (radical rank {0}); apply canonical_triple first")]
    Degenerate(usize),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}

fn loop_label(location: &Option<(usize, usize, usize)>) -> String {
    match location {
        Some((k, i, j)) => format!(" on loop {k} for pair ({i}, {j})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
