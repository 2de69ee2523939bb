//! See-saw optimization: alternate between the best preparations for fixed
//! measurements and the best measurements for fixed preparations.

pub mod error;
pub mod programs;
pub mod record;
pub mod run;

pub use error::{Error, Result};
pub use programs::{measurement_program, optimize_measurements, optimize_preparations, preparation_program};
pub use record::{OperatorDoc, RecordDoc, RunDoc};
pub use run::{run, run_from, run_with, SeesawConfig, SeesawRecord, SeesawRun, Termination};
