use ctxdim_core::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Relative tolerance on `|bᵀy − Tr(CX)|` and on `Tr(XS)`.
    pub gap_tol: f64,
    /// Relative tolerance on primal and dual residuals.
    pub feas_tol: f64,
    /// Relative threshold below which a constraint row counts as dependent.
    pub rank_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_iter: 200, gap_tol: 1e-8, feas_tol: 1e-8, rank_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    /// The Newton system became numerically singular or steps collapsed; best iterate returned.
    Stalled,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::MaxIterations => "max-iterations",
            SolveStatus::Stalled => "stalled",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence accompanying an infeasible or unbounded status.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// `Σ_j y_j A_j ⪰ 0` with `bᵀy = −1`.
    PrimalInfeasible { y: Vec<f64> },
    /// `X ⪰ 0` with `A(X) = 0` and `Tr(CX) = 1`.
    DualInfeasible { x: Vec<CMatrix> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `Σ_i Tr(X_i S_i)`
    pub complementarity: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub primal_step: f64,
    pub dual_step: f64,
    pub centering: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub x: Vec<CMatrix>,
    pub y: Vec<f64>,
    pub s: Vec<CMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `bᵀy − Σ Tr(C_i X_i)`
    pub gap: f64,
    /// `‖A(X) − b‖₂ / (1 + ‖b‖₂)`
    pub primal_residual: f64,
    /// `‖Σ_j y_j A_j − C − S‖_F / (1 + ‖C‖_F)`
    pub dual_residual: f64,
    pub iterations: usize,
    pub removed_rows: Vec<usize>,
    pub certificate: Option<Certificate>,
    pub history: Vec<IterationRecord>,
}

impl SdpSolution {
    pub fn objective(&self) -> f64 {
        self.primal_objective
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}
