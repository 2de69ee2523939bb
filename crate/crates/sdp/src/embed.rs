//! Real symmetric embedding of complex Hermitian blocks.
//!
//! A Hermitian `n×n` coefficient `A` maps to `½[[Re A, −Im A], [Im A, Re A]]` and a
//! variable `X` to `[[Re X, −Im X], [Im X, Re X]]`, so `Tr(ÃX̃) = Tr(AX)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use ctxdim_core::linalg::CMatrix;

use crate::problem::SdpProblem;

pub type RMatrix = DMatrix<f64>;

/// Coefficient `½[[Re A, −Im A], [Im A, Re A]]`.
pub fn embed_coefficient(a: &CMatrix) -> RMatrix {
    let n = a.nrows();
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    for p in 0..n {
        for q in 0..n {
            let z = a[(p, q)];
            m[(p, q)] = 0.5 * z.re;
            m[(n + p, n + q)] = 0.5 * z.re;
            m[(p, n + q)] = -0.5 * z.im;
            m[(n + p, q)] = 0.5 * z.im;
        }
    }
    m
}

/// Variable `[[Re X, −Im X], [Im X, Re X]]`.
pub fn embed_variable(x: &CMatrix) -> RMatrix {
    embed_coefficient(x).scale(2.0)
}

/// Left inverse of [`embed_variable`], averaging the redundant copies.
pub fn unembed_variable(m: &RMatrix) -> CMatrix {
    let n = m.nrows() / 2;
    CMatrix::from_fn(n, n, |p, q| {
        Complex64::new(
            0.5 * (m[(p, q)] + m[(n + p, n + q)]),
            0.5 * (m[(n + p, q)] - m[(p, n + q)]),
        )
    })
}

/// Left inverse of [`embed_coefficient`].
pub fn unembed_coefficient(m: &RMatrix) -> CMatrix {
    unembed_variable(m).scale(2.0)
}

/// One block's share of an embedded constraint.
#[derive(Debug, Clone)]
pub(crate) struct RowPart {
    pub block: usize,
    pub dense: RMatrix,
    pub triplets: Vec<(usize, usize, f64)>,
}

impl RowPart {
    fn new(block: usize, dense: RMatrix) -> Self {
        let mut triplets = Vec::new();
        for c in 0..dense.ncols() {
            for r in 0..dense.nrows() {
                let w = dense[(r, c)];
                if w != 0.0 {
                    triplets.push((r, c, w));
                }
            }
        }
        Self { block, dense, triplets }
    }

    /// `X·A·Z`, from outer products when `A` is sparse.
    pub fn sandwich(&self, x: &RMatrix, z: &RMatrix) -> RMatrix {
        let n = x.nrows();
        if self.triplets.len() >= n {
            return x * &self.dense * z;
        }
        let mut out = RMatrix::zeros(n, n);
        for &(r, c, w) in &self.triplets {
            out.ger(w, &x.column(r), &z.row(c).transpose(), 1.0);
        }
        out
    }

    /// `Tr(A·M)` for symmetric `A`.
    pub fn inner(&self, m: &RMatrix) -> f64 {
        self.triplets.iter().map(|&(r, c, w)| w * m[(c, r)]).sum()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RealProblem {
    pub dims: Vec<usize>,
    pub c: Vec<RMatrix>,
    pub rows: Vec<Vec<RowPart>>,
    pub b: DVector<f64>,
}

impl RealProblem {
    pub fn from_complex(p: &SdpProblem) -> Self {
        let dims = p.blocks.iter().map(|b| 2 * b.dim).collect();
        let c = p.objective.iter().map(embed_coefficient).collect();
        let rows = p
            .constraints
            .iter()
            .map(|con| {
                // merge repeated blocks so each row has at most one part per block
                let mut parts: Vec<RowPart> = Vec::new();
                for (block, a) in &con.terms {
                    let e = embed_coefficient(a);
                    match parts.iter_mut().find(|part| part.block == *block) {
                        Some(part) => *part = RowPart::new(*block, &part.dense + e),
                        None => parts.push(RowPart::new(*block, e)),
                    }
                }
                parts.sort_by_key(|part| part.block);
                parts
            })
            .collect();
        let b = DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|c| c.rhs));
        Self { dims, c, rows, b }
    }
}
