use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unknown names, unreadable or malformed input.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] polygamy_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this error. Verification violations are not
    /// errors and exit with 1 through the normal path.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
