use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key: {0}")]
    UnknownKey(String),

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("invalid override `{spec}`: {message}")]
    Override { spec: String, message: String },

    #[error("scenario `{scenario}`: {source}")]
    Engine {
        scenario: String,
        #[source]
        source: crate::Error,
    },

    #[error("cannot decode report: {0}")]
    Decode(String),
}

impl ScenarioError {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for problems with the scenario file or its overrides, as opposed
    /// to failures while computing.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Self::Engine { .. })
    }
}
