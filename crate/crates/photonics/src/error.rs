use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ctxdim_core::Error),

    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid setup: {0}")]
    Setup(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("preparation fit failed: {0}")]
    Fit(String),

    #[error("{0} Monte-Carlo samples requested, at least {min} needed", min = crate::montecarlo::MIN_SAMPLES)]
    TooFewSamples(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
