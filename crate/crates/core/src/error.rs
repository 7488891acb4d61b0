//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("duplicate record key {key} (first seen at line {first_line})")]
    DuplicateKey { key: String, first_line: usize },

    #[error("tau_bench task id requires a shard, got raw id {raw_id:?}")]
    MissingShard { raw_id: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("unknown model {0:?} (not in the peer pool)")]
    UnknownModel(String),

    #[error("model {0:?} has no stage-1 tasks")]
    EmptyProfile(String),

    #[error("mixed-model fit did not converge: {message} (last variance ratio {last_ratio})")]
    NonConvergence { message: String, last_ratio: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
