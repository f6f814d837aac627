use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments that break an operation's contract (mixed models, wrong
    /// dimensions, malformed points).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Parameters outside the window where a result is stated.
    #[error("invalid parameters: {0}")]
    Validation(String),

    /// Enumeration would produce more words than the configured cap.
    #[error("word count {requested} exceeds cap {cap}; lower the word length or raise the cap")]
    CapExceeded { requested: u128, cap: usize },

    /// Geometric construction that has no solution for the given data.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// An estimator could not produce a value from the available data.
    #[error("estimator error: {0}")]
    Estimator(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
