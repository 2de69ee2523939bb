//! JSON documents for run records, with operators as real/imaginary row lists.

use serde::{Deserialize, Serialize};

use ctxdim_core::linalg::CMatrix;
use ctxdim_core::quantum::{Assemblage, HermitianOperator, Povm};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::run::{SeesawRecord, SeesawRun, Termination};

pub const RECORD_FORMAT: &str = "ctxdim-seesaw-record v1";
pub const RUN_FORMAT: &str = "ctxdim-seesaw-run v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorDoc {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect()).collect();
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|row| row.len() != n) {
            return Err(Error::Shape { expected: format!("{n}x{n} real and imaginary parts"), found: "ragged rows".into() });
        }
        Ok(CMatrix::from_fn(n, n, |r, c| Complex64::new(self.re[r][c], self.im[r][c])))
    }
}

fn operators(ops: &[HermitianOperator]) -> Vec<OperatorDoc> {
    ops.iter().map(|o| OperatorDoc::from_matrix(o.matrix())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordDoc {
    pub format: String,
    pub restart: usize,
    pub seed: u64,
    pub trace: Vec<f64>,
    pub final_value: Option<f64>,
    pub termination: String,
    pub failure: Option<String>,
    /// `assemblage[x][a]`
    pub assemblage: Option<Vec<Vec<OperatorDoc>>>,
    /// `povms[y][b]`
    pub povms: Vec<Vec<OperatorDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDoc {
    pub format: String,
    pub ppt: bool,
    pub best_restart: usize,
    pub best_value: f64,
    pub records: Vec<RecordDoc>,
}

impl SeesawRecord {
    pub fn to_doc(&self) -> RecordDoc {
        RecordDoc {
            format: RECORD_FORMAT.to_string(),
            restart: self.restart,
            seed: self.seed,
            trace: self.trace.clone(),
            final_value: self.final_value.is_finite().then_some(self.final_value),
            termination: self.termination.as_str().to_string(),
            failure: match &self.termination {
                Termination::Failed(msg) => Some(msg.clone()),
                _ => None,
            },
            assemblage: self.assemblage.as_ref().map(|a| a.sigmas().iter().map(|row| operators(row)).collect()),
            povms: self.povms.iter().map(|p| operators(p.effects())).collect(),
        }
    }
}

impl RecordDoc {
    /// Rebuilds and re-validates the stored operators.
    pub fn operators(&self) -> Result<(Option<Assemblage>, Vec<Povm>)> {
        let assemblage = match &self.assemblage {
            Some(rows) => Some(Assemblage::from_matrices(
                rows.iter().map(|row| row.iter().map(OperatorDoc::to_matrix).collect()).collect::<Result<_>>()?,
            )?),
            None => None,
        };
        let povms = self
            .povms
            .iter()
            .map(|p| Ok(Povm::from_matrices(p.iter().map(OperatorDoc::to_matrix).collect::<Result<_>>()?)?))
            .collect::<Result<_>>()?;
        Ok((assemblage, povms))
    }
}

impl SeesawRun {
    pub fn to_doc(&self, ppt: bool) -> RunDoc {
        RunDoc {
            format: RUN_FORMAT.to_string(),
            ppt,
            best_restart: self.best,
            best_value: self.best_record().final_value,
            records: self.records.iter().map(SeesawRecord::to_doc).collect(),
        }
    }
}
