use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An instance exceeds a configured size guard.
    #[error("instance too large: {what} is {actual}, cap is {cap}")]
    TooLarge {
        what: &'static str,
        actual: String,
        cap: String,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn too_large(
        what: &'static str,
        actual: impl ToString,
        cap: impl ToString,
    ) -> Self {
        Error::TooLarge {
            what,
            actual: actual.to_string(),
            cap: cap.to_string(),
        }
    }

    pub fn is_too_large(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
