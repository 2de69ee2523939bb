//! Dense primal-dual interior-point solver for semidefinite programs over several
//! complex Hermitian PSD blocks with linear equality constraints.

pub mod embed;
pub mod error;
pub mod format;
pub mod ipm;
mod presolve;
pub mod problem;
pub mod solution;
pub mod validate;

pub use error::{Error, Result};
pub use ipm::solve;
pub use problem::{BlockSpec, Constraint, SdpProblem};
pub use solution::{Certificate, IterationRecord, SdpSolution, SolveOptions, SolveStatus};
pub use validate::{validate_solution, CertificateCheck, OptimalityTolerance, ResidualReport};
