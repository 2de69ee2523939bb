//! Random SDPs with strictly feasible primal and dual points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use ctxdim_core::linalg::{identity, CMatrix};
use ctxdim_core::random::{complex_gaussian, rng_from_seed};
use ctxdim_sdp::SdpProblem;

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// `G G† / n + 𝕀/2`, safely inside the cone.
pub fn random_positive_definite<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(n, n, rng);
    (&g * g.adjoint()).scale(1.0 / n as f64) + identity(n).scale(0.5)
}

#[derive(Debug, Clone)]
pub struct FeasibleProblem {
    pub problem: SdpProblem,
    /// A strictly feasible primal point.
    pub x0: Vec<CMatrix>,
    /// A strictly feasible dual point.
    pub y0: Vec<f64>,
}

/// At most `max_blocks` blocks of dimension ≤ `max_dim` and at most `max_constraints` rows,
/// with `b = A(X₀)` and `C = Aᵀy₀ − S₀` so both sides are strictly feasible.
pub fn random_feasible_problem(seed: u64, max_blocks: usize, max_dim: usize, max_constraints: usize) -> FeasibleProblem {
    let mut rng = rng_from_seed(seed);
    let k = rng.random_range(1..=max_blocks);
    let dims: Vec<usize> = (0..k).map(|_| rng.random_range(1..=max_dim)).collect();
    let dof: usize = dims.iter().map(|d| d * d).sum();
    let m = rng.random_range(1..=max_constraints.min(dof.saturating_sub(1)).max(1));

    let mut problem = SdpProblem::new();
    for (i, &d) in dims.iter().enumerate() {
        problem.add_block(format!("b{i}"), d);
    }
    let x0: Vec<CMatrix> = dims.iter().map(|&d| random_positive_definite(d, &mut rng)).collect();
    let mut y0 = Vec::with_capacity(m);
    for _ in 0..m {
        let mut terms = Vec::new();
        for (i, &d) in dims.iter().enumerate() {
            if terms.is_empty() && i + 1 == k || rng.random_bool(0.7) {
                terms.push((i, random_hermitian(d, &mut rng)));
            }
        }
        let rhs = terms.iter().map(|(i, a)| (a * &x0[*i]).trace().re).sum();
        problem.add_constraint(terms, rhs);
        y0.push(rng.random_range(-1.0..1.0));
    }
    for (i, &d) in dims.iter().enumerate() {
        let s0 = random_positive_definite(d, &mut rng);
        let mut c = -s0;
        for (con, y) in problem.constraints.iter().zip(&y0) {
            for (b, a) in &con.terms {
                if *b == i {
                    c += a.scale(*y);
                }
            }
        }
        problem.set_objective(i, c);
    }
    FeasibleProblem { problem, x0, y0 }
}

/// Real Gram matrix `⟨A_j, A_k⟩` of the constraint rows.
pub fn gram(problem: &SdpProblem) -> DMatrix<f64> {
    let m = problem.constraints.len();
    DMatrix::from_fn(m, m, |j, k| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (bj, aj) in &problem.constraints[j].terms {
            for (bk, ak) in &problem.constraints[k].terms {
                if bj == bk {
                    acc += aj.zip_fold(ak, Complex64::new(0.0, 0.0), |s, x, y| s + x.conj() * y);
                }
            }
        }
        acc.re
    })
}
