use thiserror::Error;

#[derive(Debug, Error)]
pub enum SlicingError {
    /// Invalid configuration or specification; `location` names the offending field.
    #[error("usage error at {location}: {message}")]
    Usage { location: String, message: String },
    #[error(transparent)]
    Core(#[from] slicing_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl SlicingError {
    pub fn usage(location: impl Into<String>, message: impl Into<String>) -> Self {
        SlicingError::Usage { location: location.into(), message: message.into() }
    }

    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SlicingError::Usage { .. } | SlicingError::Json(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn at(location: &str, err: slicing_core::Error) -> Self {
        SlicingError::usage(location, err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SlicingError>;
