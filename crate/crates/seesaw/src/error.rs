use ctxdim_sdp::SolveStatus;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{program} program ended with status {status} (gap {gap:e}, primal residual {primal_residual:e}, dual residual {dual_residual:e})")]
    Solver {
        program: &'static str,
        status: SolveStatus,
        gap: f64,
        primal_residual: f64,
        dual_residual: f64,
    },

    #[error(transparent)]
    Sdp(#[from] ctxdim_sdp::Error),

    #[error(transparent)]
    Quantum(#[from] ctxdim_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("all {0} restarts failed")]
    AllRestartsFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
