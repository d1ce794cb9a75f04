use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed codec string. `position` is a byte offset into the input.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    /// Well-formed text describing an impossible graph.
    #[error("structural error: {0}")]
    Structure(String),

    /// Two graphs that cannot be combined into a pair.
    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("need graph data to depth {needed}, have {available}")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}
