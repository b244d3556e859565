use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation error at {location}: {source}")]
    Validation { location: String, source: skewgroup::Error },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
}

impl CliError {
    pub fn validation(location: impl Into<String>, source: skewgroup::Error) -> Self {
        CliError::Validation { location: location.into(), source }
    }

    pub fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self::validation(location, skewgroup::Error::InvalidInput(message.into()))
    }

    /// Process exit code: 3 for numerical breakdowns, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { source, .. } if source.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
