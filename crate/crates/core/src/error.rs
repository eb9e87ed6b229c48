use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("stream error: {0}")]
    Stream(String),

    #[error("line {line}, field `{field}`: {message}")]
    Format {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unsupported {kind} format-version {found} (this build reads up to {supported})")]
    Version {
        kind: &'static str,
        found: u32,
        supported: u32,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report encoding: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}
