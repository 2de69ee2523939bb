//! JSON reports written by the subcommands.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use ctxdim_core::{BoundsRegistry, CertificationVerdict, CertifiedDimension};
use ctxdim_photonics::MonteCarloSummary;

pub const CERTIFICATION_FORMAT: &str = "ctxdim-certification v1";
pub const MONTE_CARLO_FORMAT: &str = "ctxdim-montecarlo v1";
pub const CANONICAL_FORMAT: &str = "ctxdim-canonical v1";
pub const TOOL: &str = "ctxdim";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub format: String,
    pub tool: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub input: InputDigest,
    pub functional: String,
    pub value: f64,
    pub std_error: f64,
    pub k_sigma: f64,
    pub thresholds_crossed: Vec<f64>,
    pub verdict: String,
    /// `None` when the value is compatible with a noncontextual model.
    pub certified_dimension: Option<usize>,
    pub exceeds_quantum_max: bool,
    pub exit_code: i32,
}

impl CertificationReport {
    pub fn new(verdict: &CertificationVerdict, input: InputDigest, timestamp: u64) -> Self {
        Self {
            format: CERTIFICATION_FORMAT.to_string(),
            tool: TOOL.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp,
            input,
            functional: verdict.functional.clone(),
            value: verdict.value,
            std_error: verdict.std_error,
            k_sigma: verdict.k_sigma,
            thresholds_crossed: verdict.thresholds_crossed.clone(),
            verdict: verdict.certified.to_string(),
            certified_dimension: match verdict.certified {
                CertifiedDimension::NoncontextualCompatible => None,
                CertifiedDimension::AtLeast(d) => Some(d),
            },
            exceeds_quantum_max: verdict.exceeds_quantum_max,
            exit_code: verdict.certified.exit_code(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "functional  {}", self.functional).unwrap();
        writeln!(w, "value       {:.6} +- {} (k = {})", self.value, self.std_error, self.k_sigma).unwrap();
        let crossed: Vec<String> = self.thresholds_crossed.iter().map(|t| format!("{t:.6}")).collect();
        writeln!(w, "crossed     {}", if crossed.is_empty() { "none".to_string() } else { crossed.join(", ") }).unwrap();
        writeln!(w, "verdict     {}", self.verdict).unwrap();
        if self.exceeds_quantum_max {
            writeln!(w, "warning     value exceeds the quantum maximum").unwrap();
        }
        writeln!(w, "input       {} sha256:{}", self.input.path, self.input.sha256).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub format: String,
    pub tool_version: String,
    pub input: InputDigest,
    pub summary: MonteCarloSummary,
}

/// Registry rows for one functional, with provenance.
pub fn bounds_text(registry: &BoundsRegistry, functional: &str) -> ctxdim_core::Result<String> {
    let b = registry.get(functional)?;
    let mut out = String::new();
    writeln!(out, "{}", b.name).unwrap();
    writeln!(out, "  noncontextual  {:<12.8} {}", b.noncontextual.value, b.noncontextual.provenance).unwrap();
    for (d, bound) in &b.dimension {
        writeln!(out, "  dimension {d:<4} {:<12.8} {}", bound.value, bound.provenance).unwrap();
    }
    writeln!(out, "  quantum max    {:<12.8} {}", b.quantum_max.value, b.quantum_max.provenance).unwrap();
    Ok(out)
}
