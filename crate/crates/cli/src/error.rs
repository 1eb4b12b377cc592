use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] kerrline::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read config `{path}`: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },

    #[error("cannot write `{path}`: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn output(path: &Path, source: std::io::Error) -> Self {
        CliError::Output {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    /// 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_validation() => 2,
            _ => 1,
        }
    }
}
