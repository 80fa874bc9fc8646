use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment '{0}' (run `pathint list` for the available ones)")]
    UnknownExperiment(String),

    #[error("experiment '{experiment}' has no parameter '{key}'")]
    UnknownKey { experiment: String, key: String },

    #[error("parameter '{key}': cannot parse '{value}' as {expected}")]
    InvalidParam { key: String, value: String, expected: &'static str },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Library(#[from] pathint::error::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
