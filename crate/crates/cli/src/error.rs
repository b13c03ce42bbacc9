use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("cannot read config file {path}: {message}")]
    ConfigFile { path: String, message: String },
    #[error("numeric error: {0}")]
    Numeric(#[from] gwc_core::error::Error),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::ConfigFile { .. } => EXIT_INVALID,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}
