use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The family has no classical path at this evaluation point.
    #[error("no path for family {family}: {reason}")]
    NoPath { family: String, reason: String },
    #[error("degenerate pencil for family {family} at z = {z:e}")]
    Caustic { family: String, z: f64 },
    #[error("numeric failure in {context}: {detail}")]
    Numeric { context: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numeric(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Numeric { context: context.into(), detail: detail.into() }
    }

    pub fn is_no_path(&self) -> bool {
        matches!(self, Error::NoPath { .. })
    }
}
