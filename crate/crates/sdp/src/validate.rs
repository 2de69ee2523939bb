//! From-scratch recomputation of residuals, PSD margins and complementary slackness.

use ctxdim_core::eigen::min_eigenvalue;
use ctxdim_core::linalg::{trace_product, CMatrix};

use crate::problem::SdpProblem;
use crate::solution::{Certificate, SdpSolution};

pub const CERTIFICATE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityTolerance {
    pub psd: f64,
    /// Relative to `1 + |objective|`.
    pub gap: f64,
    pub residual: f64,
    pub complementarity: f64,
}

impl Default for OptimalityTolerance {
    fn default() -> Self {
        Self { psd: 1e-8, gap: 1e-7, residual: 1e-8, complementarity: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Recomputed {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub primal_residual_abs: f64,
    pub dual_residual_abs: f64,
}

fn frobenius(ms: &[CMatrix]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// `Σ_i Tr(A_{j,i} X_i)` for every row.
pub fn constraint_values(problem: &SdpProblem, x: &[CMatrix]) -> Vec<f64> {
    problem
        .constraints
        .iter()
        .map(|con| con.terms.iter().map(|(i, a)| trace_product(a, &x[*i]).re).sum())
        .collect()
}

/// `Σ_j y_j A_{j,i}` per block.
pub fn dual_operator(problem: &SdpProblem, y: &[f64]) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = problem.blocks.iter().map(|b| CMatrix::zeros(b.dim, b.dim)).collect();
    for (con, &yj) in problem.constraints.iter().zip(y) {
        for (i, a) in &con.terms {
            out[*i] += a.scale(yj);
        }
    }
    out
}

pub(crate) fn recompute(problem: &SdpProblem, x: &[CMatrix], y: &[f64], s: &[CMatrix]) -> Recomputed {
    let b: Vec<f64> = problem.constraints.iter().map(|c| c.rhs).collect();
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ax = constraint_values(problem, x);
    let primal_residual_abs = ax.iter().zip(&b).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let aty = dual_operator(problem, y);
    let rd: Vec<CMatrix> = (0..x.len()).map(|i| &aty[i] - &problem.objective[i] - &s[i]).collect();
    let dual_residual_abs = frobenius(&rd);
    Recomputed {
        primal_objective: problem.objective.iter().zip(x).map(|(c, x)| trace_product(c, x).re).sum(),
        dual_objective: b.iter().zip(y).map(|(b, y)| b * y).sum(),
        primal_residual: primal_residual_abs / (1.0 + norm_b),
        dual_residual: dual_residual_abs / (1.0 + frobenius(&problem.objective)),
        primal_residual_abs,
        dual_residual_abs,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateCheck {
    /// `bᵀy` and `λ_min(Σ_j y_j A_j) / |bᵀy|` over blocks.
    Farkas { b_dot_y: f64, scaled_min_eigenvalue: f64, holds: bool },
    /// `Tr(CX)`, `‖A(X)‖ / Tr(CX)` and `λ_min(X)` over blocks.
    ImprovingRay { objective: f64, scaled_residual: f64, min_eigenvalue: f64, holds: bool },
}

impl CertificateCheck {
    pub fn holds(&self) -> bool {
        match self {
            CertificateCheck::Farkas { holds, .. } | CertificateCheck::ImprovingRay { holds, .. } => *holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub primal_residual_abs: f64,
    pub dual_residual_abs: f64,
    pub min_eigenvalue_x: Vec<f64>,
    pub min_eigenvalue_s: Vec<f64>,
    /// `Tr(X_i S_i)` per block.
    pub complementarity: Vec<f64>,
    pub certificate: Option<CertificateCheck>,
}

impl ResidualReport {
    /// Every optimality condition that fails under `tol`, as readable lines.
    pub fn violations(&self, tol: &OptimalityTolerance) -> Vec<String> {
        let mut out = Vec::new();
        let scale = 1.0 + self.primal_objective.abs();
        if self.gap.abs() > tol.gap * scale {
            out.push(format!("duality gap {:e} exceeds {:e}", self.gap, tol.gap * scale));
        }
        if self.primal_residual > tol.residual {
            out.push(format!("primal residual {:e}", self.primal_residual));
        }
        if self.dual_residual > tol.residual {
            out.push(format!("dual residual {:e}", self.dual_residual));
        }
        for (i, &l) in self.min_eigenvalue_x.iter().enumerate() {
            if l < -tol.psd {
                out.push(format!("block {i}: lambda_min(X) = {l:e}"));
            }
        }
        for (i, &l) in self.min_eigenvalue_s.iter().enumerate() {
            if l < -tol.psd {
                out.push(format!("block {i}: lambda_min(S) = {l:e}"));
            }
        }
        for (i, &c) in self.complementarity.iter().enumerate() {
            if c.abs() > tol.complementarity {
                out.push(format!("block {i}: Tr(XS) = {c:e}"));
            }
        }
        out
    }

    pub fn is_optimal(&self, tol: &OptimalityTolerance) -> bool {
        self.violations(tol).is_empty()
    }
}

fn check_certificate(problem: &SdpProblem, c: &Certificate) -> CertificateCheck {
    match c {
        Certificate::PrimalInfeasible { y } => {
            let b_dot_y: f64 = problem.constraints.iter().zip(y).map(|(c, y)| c.rhs * y).sum();
            let lambda = dual_operator(problem, y).iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
            let scaled = lambda / b_dot_y.abs();
            CertificateCheck::Farkas {
                b_dot_y,
                scaled_min_eigenvalue: scaled,
                holds: b_dot_y < 0.0 && scaled >= -CERTIFICATE_TOL,
            }
        }
        Certificate::DualInfeasible { x } => {
            let objective: f64 = problem.objective.iter().zip(x).map(|(c, x)| trace_product(c, x).re).sum();
            let ax = constraint_values(problem, x);
            let scaled = ax.iter().map(|v| v * v).sum::<f64>().sqrt() / objective.abs();
            let lambda = x.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
            CertificateCheck::ImprovingRay {
                objective,
                scaled_residual: scaled,
                min_eigenvalue: lambda,
                holds: objective > 0.0 && scaled <= CERTIFICATE_TOL && lambda >= -CERTIFICATE_TOL * objective,
            }
        }
    }
}

/// Recomputes every quantity from the problem data and the returned blocks alone.
pub fn validate_solution(problem: &SdpProblem, solution: &SdpSolution) -> ResidualReport {
    let r = recompute(problem, &solution.x, &solution.y, &solution.s);
    ResidualReport {
        primal_objective: r.primal_objective,
        dual_objective: r.dual_objective,
        gap: r.dual_objective - r.primal_objective,
        primal_residual: r.primal_residual,
        dual_residual: r.dual_residual,
        primal_residual_abs: r.primal_residual_abs,
        dual_residual_abs: r.dual_residual_abs,
        min_eigenvalue_x: solution.x.iter().map(min_eigenvalue).collect(),
        min_eigenvalue_s: solution.s.iter().map(min_eigenvalue).collect(),
        complementarity: solution.x.iter().zip(&solution.s).map(|(x, s)| trace_product(x, s).re).collect(),
        certificate: solution.certificate.as_ref().map(|c| check_certificate(problem, c)),
    }
}
