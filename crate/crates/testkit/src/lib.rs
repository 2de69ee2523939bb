//! Reference oracles that share no numerical code with the crates they check.

pub mod admm;
pub mod problems;
