//! Block Hermitian SDPs in standard form.
//!
//! ```text
//! maximize   Σ_i Tr(C_i X_i)
//! subject to Σ_i Tr(A_{j,i} X_i) = b_j,   X_i ⪰ 0
//! ```

use ctxdim_core::linalg::{hermiticity_defect, CMatrix};

use crate::error::{Error, Result};

pub const COEFFICIENT_HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec {
    pub name: String,
    pub dim: usize,
}

/// One linear equality `Σ_i Tr(A_i X_i) = rhs`; blocks absent from `terms` have zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, CMatrix)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SdpProblem {
    pub blocks: Vec<BlockSpec>,
    pub objective: Vec<CMatrix>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_block(&mut self, name: impl Into<String>, dim: usize) -> usize {
        self.blocks.push(BlockSpec { name: name.into(), dim });
        self.objective.push(CMatrix::zeros(dim, dim));
        self.blocks.len() - 1
    }

    pub fn set_objective(&mut self, block: usize, c: CMatrix) {
        self.objective[block] = c;
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, CMatrix)>, rhs: f64) -> usize {
        self.constraints.push(Constraint { terms, rhs });
        self.constraints.len() - 1
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    /// Shape, finiteness and hermiticity of every coefficient.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidProblem("no blocks".into()));
        }
        if self.objective.len() != self.blocks.len() {
            return Err(Error::InvalidProblem(format!(
                "{} objective blocks for {} variables",
                self.objective.len(),
                self.blocks.len()
            )));
        }
        let check = |what: &str, block: usize, m: &CMatrix| -> Result<()> {
            let dim = self.blocks[block].dim;
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidProblem(format!(
                    "{what}: block {block} coefficient is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidProblem(format!("{what}: non-finite coefficient")));
            }
            let deviation = hermiticity_defect(m);
            if deviation > COEFFICIENT_HERMITICITY_TOL {
                return Err(Error::NotHermitian { what: what.to_string(), block, deviation });
            }
            Ok(())
        };
        for (i, c) in self.objective.iter().enumerate() {
            check("objective", i, c)?;
        }
        for (j, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(Error::InvalidProblem(format!("constraint {j}: non-finite rhs")));
            }
            for (block, a) in &con.terms {
                if *block >= self.blocks.len() {
                    return Err(Error::InvalidProblem(format!("constraint {j}: unknown block {block}")));
                }
                check(&format!("constraint {j}"), *block, a)?;
            }
        }
        Ok(())
    }

    /// Copy with constraint `j` scaled by `factor` on both sides.
    pub fn scale_constraint(&self, j: usize, factor: f64) -> Self {
        let mut p = self.clone();
        let con = &mut p.constraints[j];
        con.rhs *= factor;
        for (_, a) in &mut con.terms {
            *a = a.scale(factor);
        }
        p
    }
}
