use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported weight kappa={0}: only kappa=12 is built in; load other weights from a coefficient file")]
    UnsupportedWeight(u32),

    #[error("invalid weight configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot allocate coefficient tables for N={n}: {reason}")]
    Resource { n: usize, reason: String },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("enumeration needs {required} tuples but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("calibration failed: {0}")]
    Calibration(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
