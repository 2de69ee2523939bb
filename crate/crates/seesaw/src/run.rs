//! Restarted alternation with deterministic seeding and merging.

use rayon::prelude::*;

use ctxdim_core::functional::{cglmp4, InequalityFunctional};
use ctxdim_core::quantum::{Assemblage, Povm};
use ctxdim_core::random::{mix_seed, random_projective_povm};

use crate::error::{Error, Result};
use crate::programs::{optimize_measurements, optimize_preparations, DIM};


#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub convergence_window: usize,
    pub value_tol: f64,
    pub master_seed: u64,
    pub max_alternations: usize,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { restarts: 50, convergence_window: 10, value_tol: 1e-7, master_seed: 0, max_alternations: 500 }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if self.convergence_window < 2 {
            return Err(Error::Config("convergence_window must be at least 2".into()));
        }
        if self.value_tol.is_nan() || self.value_tol < 0.0 {
            return Err(Error::Config(format!("value_tol {} is not a non-negative number", self.value_tol)));
        }
        if self.max_alternations == 0 {
            return Err(Error::Config("max_alternations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn restart_seed(&self, restart: usize) -> u64 {
        mix_seed(self.master_seed, restart as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Converged,
    MaxAlternations,
    Failed(String),
}

impl Termination {
    pub fn as_str(&self) -> &str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxAlternations => "max-alternations",
            Termination::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawRecord {
    pub restart: usize,
    pub seed: u64,
    /// Objective after every half-step: preparations, measurements, preparations, ...
    pub trace: Vec<f64>,
    pub final_value: f64,
    pub assemblage: Option<Assemblage>,
    pub povms: Vec<Povm>,
    pub termination: Termination,
}

impl SeesawRecord {
    pub fn alternations(&self) -> usize {
        self.trace.len() / 2
    }

    /// Values after each completed alternation.
    pub fn alternation_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.trace.iter().skip(1).step_by(2).copied()
    }

    pub fn succeeded(&self) -> bool {
        !matches!(self.termination, Termination::Failed(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawRun {
    pub best: usize,
    pub records: Vec<SeesawRecord>,
}

impl SeesawRun {
    pub fn best_record(&self) -> &SeesawRecord {
        &self.records[self.best]
    }
}

pub fn initial_povms(seed: u64) -> Result<Vec<Povm>> {
    (0..2).map(|y| Ok(random_projective_povm(DIM, 4, mix_seed(seed, y))?)).collect()
}

fn converged(values: &[f64], window: usize, tol: f64) -> bool {
    if values.len() < window {
        return false;
    }
    let tail = &values[values.len() - window..];
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo <= tol
}

/// One restart from the given measurements.
pub fn run_from(
    functional: &InequalityFunctional,
    config: &SeesawConfig,
    ppt: bool,
    restart: usize,
    seed: u64,
    start: Vec<Povm>,
) -> SeesawRecord {
    let mut record = SeesawRecord {
        restart,
        seed,
        trace: Vec::new(),
        final_value: f64::NEG_INFINITY,
        assemblage: None,
        povms: start,
        termination: Termination::MaxAlternations,
    };
    let mut values = Vec::new();
    for _ in 0..config.max_alternations {
        let step = optimize_preparations(functional, &record.povms, ppt).and_then(|(ass, v1)| {
            record.trace.push(v1);
            let (povms, v2) = optimize_measurements(functional, &ass)?;
            Ok((ass, povms, v2))
        });
        match step {
            Ok((ass, povms, v)) => {
                record.trace.push(v);
                record.assemblage = Some(ass);
                record.povms = povms;
                record.final_value = v;
                values.push(v);
            }
            Err(e) => {
                record.termination = Termination::Failed(e.to_string());
                return record;
            }
        }
        if converged(&values, config.convergence_window, config.value_tol) {
            record.termination = Termination::Converged;
            break;
        }
    }
    record
}

/// Restarts in parallel; the best record has the highest final value, ties to the lowest index.
pub fn run_with(functional: &InequalityFunctional, config: &SeesawConfig, ppt: bool) -> Result<SeesawRun> {
    config.validate()?;
    let records: Vec<SeesawRecord> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let seed = config.restart_seed(r);
            match initial_povms(seed) {
                Ok(start) => run_from(functional, config, ppt, r, seed, start),
                Err(e) => SeesawRecord {
                    restart: r,
                    seed,
                    trace: Vec::new(),
                    final_value: f64::NEG_INFINITY,
                    assemblage: None,
                    povms: Vec::new(),
                    termination: Termination::Failed(e.to_string()),
                },
            }
        })
        .collect();
    let best = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.succeeded())
        .fold(None::<usize>, |best, (i, r)| match best {
            Some(b) if records[b].final_value >= r.final_value => Some(b),
            _ => Some(i),
        })
        .ok_or(Error::AllRestartsFailed(config.restarts))?;
    Ok(SeesawRun { best, records })
}

/// See-saw on the four-outcome CGLMP functional.
pub fn run(config: &SeesawConfig, ppt: bool) -> Result<SeesawRun> {
    run_with(&cglmp4(), config, ppt)
}
