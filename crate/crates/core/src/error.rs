use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shapes or subsystem dimensions do not fit together.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// An operation was called outside its documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An iterative routine failed to converge or a bracket could not be formed.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A parameter point lies outside the region where a closed form applies.
    #[error("outside region: {0}")]
    Region(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn dimension<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
