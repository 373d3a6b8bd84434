use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not almost even: diagonal entry {index} has odd coefficient {coefficient} on order-2 element {element}")]
    NotAlmostEven {
        index: usize,
        element: String,
        coefficient: String,
    },
    #[error("matrix is not invertible over the group ring")]
    Singular,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("relation conflict: {0}")]
    Conflict(String),
    #[error("undefined invariant: {0}")]
    Undefined(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("malformed input at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
