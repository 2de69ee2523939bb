//! File formats, experimental-data ingestion and the `ctxdim` command surface.

pub mod behavior_file;
pub mod chsh_terms;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use behavior_file::{ProbabilityTableFile, TableFormat};
pub use chsh_terms::ChshTerms;
pub use commands::{execute, Cli, Command};
pub use error::{CliError, ParseError, Result};
pub use report::{CertificationReport, MonteCarloReport};
