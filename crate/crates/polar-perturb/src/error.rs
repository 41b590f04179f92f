use thiserror::Error;

/// Errors produced by code construction, decoding, and the simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: String, detail: String },

    #[error("too few conditioned samples: got {got}, need {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
