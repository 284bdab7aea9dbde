use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {msg}")]
    Config {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(
        "no coefficient cache for kappa={kappa}{wanted} in {dir}; run `coeffs --n {hint}` first"
    )]
    MissingCache {
        dir: PathBuf,
        kappa: u32,
        wanted: String,
        hint: String,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] rsmoments::Error),
}

impl CliError {
    /// 2 for usage, configuration and range problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::MissingCache { .. } => 2,
            CliError::Core(
                rsmoments::Error::OutOfRange(_) | rsmoments::Error::InvalidConfig(_),
            ) => 2,
            _ => 1,
        }
    }
}
