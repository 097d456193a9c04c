use thiserror::Error;

/// Errors raised anywhere in the tagging and combination pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("corpus contains no sentences")]
    EmptyCorpus,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot split corpus: {0}")]
    Split(String),

    #[error("cannot build folds: {0}")]
    Fold(String),

    #[error("record {index}: {message}")]
    Data { index: usize, message: String },

    #[error("training failed: {0}")]
    Train(String),

    #[error("dimension mismatch: expected {expected} features, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("alignment error at token {position}: {message}")]
    Alignment { position: usize, message: String },

    #[error("value outside domain: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
