use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected {expected}")]
    Trace { trace: f64, expected: f64 },

    #[error("effects do not sum to the identity (max deviation {deviation:e})")]
    IncompletePovm { deviation: f64 },

    #[error("assemblage marginal depends on setting {setting} (max deviation {deviation:e})")]
    Signaling { setting: usize, deviation: f64 },

    #[error("trace has non-negligible imaginary part {imag:e}")]
    ComplexTrace { imag: f64 },

    #[error("{outcomes} rank-one outcomes requested in dimension {dim}")]
    TooManyOutcomes { outcomes: usize, dim: usize },

    #[error("empty family: {0}")]
    Empty(&'static str),

    #[error("alphabet mismatch: functional expects {expected}, behavior has {found}")]
    AlphabetMismatch { expected: String, found: String },

    #[error("probability {value} at (a={a}, b={b}, x={x}, y={y}) outside [0, 1]")]
    OutOfRange { a: usize, b: usize, x: usize, y: usize, value: f64 },

    #[error("normalization for (x={x}, y={y}) is {sum}")]
    Normalization { x: usize, y: usize, sum: f64 },

    #[error("no-signaling violated by {deviation:e} ({side} marginal)")]
    NoSignaling { side: &'static str, deviation: f64 },

    #[error("missing probability at (a={a}, b={b}, x={x}, y={y})")]
    MissingEntry { a: usize, b: usize, x: usize, y: usize },

    #[error("enumeration of {count} strategy pairs exceeds the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),

    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
