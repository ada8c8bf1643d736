use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("a frame needs at least one node")]
    EmptyFrame,
    #[error("`{0}` is reserved for library transformations")]
    ReservedName(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("assignment has no value for `{0}`")]
    Unvalued(String),
    #[error("assignment mentions `{0}`, which is not in the domain")]
    Extraneous(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
