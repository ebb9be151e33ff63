use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Variants split into two families: input validation problems (bad
/// parameters, malformed files) and runtime failures. The CLI maps the
/// first family to exit code 2 and the second to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error("dimension {dim}: {message}")]
    Diagram { dim: usize, message: String },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Parse { .. }
                | Error::Format(_)
                | Error::Unsupported(_)
                | Error::Json(_)
        )
    }

    /// The offending field for parameter errors, if any.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::InvalidParameter { field, .. } => Some(field),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
