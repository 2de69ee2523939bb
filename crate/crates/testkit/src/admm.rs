//! Alternating-direction reference solver for `max Tr(CX)` s.t. `A(X) = b`, `X ⪰ 0`.
//!
//! Splits `X = Z` with `X` on the affine set and `Z` in the PSD cone; eigenvalue
//! clipping uses nalgebra's Hermitian eigensolver.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use ctxdim_core::linalg::CMatrix;
use ctxdim_sdp::SdpProblem;

use crate::problems::gram;

#[derive(Debug, Clone, Copy)]
pub struct AdmmOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub rho: f64,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self { max_iter: 200_000, tol: 1e-10, rho: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct AdmmResult {
    pub objective: f64,
    pub z: Vec<CMatrix>,
    pub iterations: usize,
    pub primal_gap: f64,
    pub converged: bool,
}

fn project_psd(m: &CMatrix) -> CMatrix {
    let h = (m + m.adjoint()).scale(0.5);
    let e = SymmetricEigen::new(h);
    let clipped = e.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0));
    &e.eigenvectors * CMatrix::from_diagonal(&clipped) * e.eigenvectors.adjoint()
}

fn apply_a(p: &SdpProblem, x: &[CMatrix]) -> DVector<f64> {
    DVector::from_iterator(
        p.constraints.len(),
        p.constraints
            .iter()
            .map(|con| con.terms.iter().map(|(i, a)| (a * &x[*i]).trace().re).sum::<f64>()),
    )
}

fn apply_at(p: &SdpProblem, y: &DVector<f64>) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = p.blocks.iter().map(|b| CMatrix::zeros(b.dim, b.dim)).collect();
    for (con, yj) in p.constraints.iter().zip(y.iter()) {
        for (i, a) in &con.terms {
            out[*i] += a.scale(*yj);
        }
    }
    out
}

fn distance(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum::<f64>().sqrt()
}

pub fn solve_admm(p: &SdpProblem, opts: &AdmmOptions) -> AdmmResult {
    // pseudo-inverse so consistent dependent rows are tolerated
    let g = gram(p).pseudo_inverse(1e-12).expect("finite Gram matrix");
    let b = DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|c| c.rhs));
    let project_affine = |w: Vec<CMatrix>| -> Vec<CMatrix> {
        let r = apply_a(p, &w) - &b;
        let lambda = &g * r;
        let corr = apply_at(p, &lambda);
        w.into_iter().zip(corr).map(|(w, c)| w - c).collect()
    };
    let zeros: Vec<CMatrix> = p.blocks.iter().map(|b| CMatrix::zeros(b.dim, b.dim)).collect();
    let mut z = zeros.clone();
    let mut u = zeros;
    let mut rho = opts.rho;
    let mut iterations = 0;
    let mut converged = false;
    let mut primal_gap = f64::INFINITY;
    for k in 0..opts.max_iter {
        iterations = k + 1;
        let w: Vec<CMatrix> =
            (0..z.len()).map(|i| &z[i] - &u[i] + p.objective[i].scale(1.0 / rho)).collect();
        let x = project_affine(w);
        let z_old = z.clone();
        z = (0..x.len()).map(|i| project_psd(&(&x[i] + &u[i]))).collect();
        for i in 0..u.len() {
            u[i] += &x[i] - &z[i];
        }
        primal_gap = distance(&x, &z);
        let dual_gap = rho * distance(&z, &z_old);
        if primal_gap < opts.tol && dual_gap < opts.tol {
            converged = true;
            break;
        }
        // residual balancing
        if k % 50 == 49 {
            let factor = if primal_gap > 10.0 * dual_gap {
                2.0
            } else if dual_gap > 10.0 * primal_gap {
                0.5
            } else {
                1.0
            };
            rho *= factor;
            for ui in &mut u {
                *ui = ui.scale(1.0 / factor);
            }
        }
    }
    let objective = p.objective.iter().zip(&z).map(|(c, z)| (c * z).trace().re).sum();
    AdmmResult { objective, z, iterations, primal_gap, converged }
}
