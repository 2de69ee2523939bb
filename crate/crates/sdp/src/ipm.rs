//! Infeasible-start primal-dual interior-point method with the HKM direction and
//! Mehrotra predictor-corrector steps, on the real symmetric embedding.

use std::f64::consts::SQRT_2;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, LU};

use crate::embed::{unembed_coefficient, unembed_variable, RMatrix, RealProblem, RowPart};
use crate::error::Result;
use crate::presolve::{presolve, Presolve};
use crate::problem::SdpProblem;
use crate::solution::{Certificate, IterationRecord, SdpSolution, SolveOptions, SolveStatus};
use crate::validate::recompute;
use ctxdim_core::linalg::hermitian_part;

const STALL_STEP: f64 = 1e-10;
const STALL_LIMIT: usize = 3;

pub fn solve(problem: &SdpProblem, options: &SolveOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let real = RealProblem::from_complex(problem);
    let rhs_tol = options.feas_tol * (1.0 + real.b.norm());
    Ok(match presolve(problem, options.rank_tol, rhs_tol) {
        Presolve::Inconsistent { certificate } => {
            let x: Vec<_> = real.dims.iter().map(|&d| RMatrix::zeros(d, d)).collect();
            let iterate = Iterate { s: x.clone(), x, y: DVector::zeros(0) };
            finish(problem, &real, &[], iterate, SolveStatus::Infeasible, Vec::new(), 0, Vec::new())
                .with_certificate(Certificate::PrimalInfeasible { y: certificate })
        }
        Presolve::Reduced { kept, removed } => Ipm::new(&real, &kept).run(problem, options, removed),
    })
}

#[derive(Clone)]
struct Iterate {
    x: Vec<RMatrix>,
    y: DVector<f64>,
    s: Vec<RMatrix>,
}

struct Direction {
    dx: Vec<RMatrix>,
    dy: DVector<f64>,
    ds: Vec<RMatrix>,
}

enum Factor {
    Cholesky(Cholesky<f64, Dyn>),
    Lu(LU<f64, Dyn, Dyn>),
}

impl Factor {
    fn new(m: DMatrix<f64>) -> Option<Self> {
        match Cholesky::new(m.clone()) {
            Some(c) => Some(Factor::Cholesky(c)),
            None => {
                let lu = m.lu();
                lu.is_invertible().then_some(Factor::Lu(lu))
            }
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let out = match self {
            Factor::Cholesky(c) => c.solve(rhs),
            Factor::Lu(lu) => lu.solve(rhs)?,
        };
        out.iter().all(|v| v.is_finite()).then_some(out)
    }
}

fn sym(m: RMatrix) -> RMatrix {
    let t = m.transpose();
    (m + t) * 0.5
}

fn inverse_spd(m: &RMatrix) -> Option<RMatrix> {
    Cholesky::new(m.clone()).map(|c| c.inverse())
}

/// Largest `α` with `X + α·ΔX ⪰ 0`, infinite when `ΔX ⪰ 0`.
fn max_step(x: &RMatrix, dx: &RMatrix) -> Option<f64> {
    let l = Cholesky::new(x.clone())?.l();
    let t = l.solve_lower_triangular(dx)?;
    let w = l.solve_lower_triangular(&t.transpose())?;
    let lambda = sym(w).symmetric_eigenvalues().min();
    Some(if lambda >= 0.0 { f64::INFINITY } else { -1.0 / lambda })
}

fn frobenius(ms: &[RMatrix]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

struct Ipm<'a> {
    real: &'a RealProblem,
    kept: &'a [usize],
    by_block: Vec<Vec<(usize, &'a RowPart)>>,
    b: DVector<f64>,
    n_total: f64,
    norm_b: f64,
    norm_c: f64,
}

impl<'a> Ipm<'a> {
    fn new(real: &'a RealProblem, kept: &'a [usize]) -> Self {
        let mut by_block = vec![Vec::new(); real.dims.len()];
        for (k, &j) in kept.iter().enumerate() {
            for part in &real.rows[j] {
                by_block[part.block].push((k, part));
            }
        }
        let b = DVector::from_iterator(kept.len(), kept.iter().map(|&j| real.b[j]));
        Self {
            real,
            kept,
            by_block,
            norm_b: b.norm(),
            b,
            n_total: real.dims.iter().sum::<usize>() as f64,
            norm_c: SQRT_2 * frobenius(&real.c),
        }
    }

    fn apply_a(&self, ms: &[RMatrix]) -> DVector<f64> {
        let mut out = DVector::zeros(self.kept.len());
        for (rows, m) in self.by_block.iter().zip(ms) {
            for &(k, part) in rows {
                out[k] += part.inner(m);
            }
        }
        out
    }

    fn apply_at(&self, y: &DVector<f64>) -> Vec<RMatrix> {
        self.real
            .dims
            .iter()
            .zip(&self.by_block)
            .map(|(&d, rows)| {
                let mut m = RMatrix::zeros(d, d);
                for &(k, part) in rows {
                    m += &part.dense * y[k];
                }
                m
            })
            .collect()
    }

    /// `M_jk = Tr(A_j X A_k Z)`
    fn schur(&self, x: &[RMatrix], z: &[RMatrix]) -> DMatrix<f64> {
        let mk = self.kept.len();
        let mut m = DMatrix::zeros(mk, mk);
        for (i, rows) in self.by_block.iter().enumerate() {
            for &(k, part_k) in rows {
                let p = part_k.sandwich(&x[i], &z[i]);
                for &(j, part_j) in rows {
                    m[(j, k)] += part_j.inner(&p);
                }
            }
        }
        sym(m)
    }

    fn start(&self) -> Iterate {
        let mut x = Vec::new();
        let mut s = Vec::new();
        for (i, &d) in self.real.dims.iter().enumerate() {
            let n = d as f64;
            let rows = &self.by_block[i];
            let ratio = rows
                .iter()
                .map(|&(k, part)| (1.0 + self.b[k].abs()) / (1.0 + part.dense.norm()))
                .fold(0.0, f64::max);
            let a_norm = rows.iter().map(|&(_, part)| part.dense.norm()).fold(0.0, f64::max);
            let xi = 10f64.max(n.sqrt()).max(n * ratio);
            let eta = 10f64.max(n.sqrt()).max(a_norm).max(self.real.c[i].norm());
            x.push(RMatrix::identity(d, d) * xi);
            s.push(RMatrix::identity(d, d) * eta);
        }
        Iterate { x, y: DVector::zeros(self.kept.len()), s }
    }

    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        factor: &Factor,
        it: &Iterate,
        z: &[RMatrix],
        g: &[RMatrix],
        xrdz: &[RMatrix],
        rd: &[RMatrix],
        rp: &DVector<f64>,
    ) -> Option<Direction> {
        let shifted: Vec<RMatrix> = g.iter().zip(xrdz).map(|(g, t)| g - t).collect();
        let rhs = self.apply_a(&shifted) - rp;
        let dy = factor.solve(&rhs)?;
        let ds: Vec<RMatrix> = self.apply_at(&dy).into_iter().zip(rd).map(|(a, r)| a + r).collect();
        let dx = (0..g.len())
            .map(|i| sym(&g[i] - &it.x[i] * &ds[i] * &z[i]))
            .collect();
        Some(Direction { dx, dy, ds })
    }

    fn steps(it: &Iterate, d: &Direction) -> Option<(f64, f64)> {
        let mut alpha = f64::INFINITY;
        let mut beta = f64::INFINITY;
        for i in 0..it.x.len() {
            alpha = alpha.min(max_step(&it.x[i], &d.dx[i])?);
            beta = beta.min(max_step(&it.s[i], &d.ds[i])?);
        }
        Some((alpha, beta))
    }

    fn run(&self, problem: &SdpProblem, options: &SolveOptions, removed: Vec<usize>) -> SdpSolution {
        let real = self.real;
        let mut it = self.start();
        let mut best: Option<(f64, Iterate)> = None;
        let mut history = Vec::new();
        let mut stalls = 0;
        let mut status = SolveStatus::MaxIterations;
        let mut certificate = None;
        let mut iterations = 0;

        for iter in 0..=options.max_iter {
            iterations = iter;
            let aty = self.apply_at(&it.y);
            let rd: Vec<RMatrix> = (0..it.x.len()).map(|i| &aty[i] - &real.c[i] - &it.s[i]).collect();
            let rp = &self.b - self.apply_a(&it.x);
            let pobj: f64 = real.c.iter().zip(&it.x).map(|(c, x)| c.dot(x)).sum();
            let dobj = self.b.dot(&it.y);
            let xs: f64 = it.x.iter().zip(&it.s).map(|(x, s)| x.dot(s)).sum();
            let pinf = rp.norm() / (1.0 + self.norm_b);
            let dinf = SQRT_2 * frobenius(&rd) / (1.0 + self.norm_c);
            let scale = 1.0 + pobj.abs();
            let score = pinf.max(dinf).max((dobj - pobj).abs() / scale).max(xs / scale);
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, it.clone()));
            }
            let mut record = IterationRecord {
                iteration: iter,
                primal_objective: pobj,
                dual_objective: dobj,
                complementarity: xs,
                primal_infeasibility: pinf,
                dual_infeasibility: dinf,
                primal_step: 0.0,
                dual_step: 0.0,
                centering: 0.0,
            };

            if pinf <= options.feas_tol
                && dinf <= options.feas_tol
                && (dobj - pobj).abs() <= options.gap_tol * scale
                && xs <= options.gap_tol * scale
            {
                history.push(record);
                status = SolveStatus::Optimal;
                best = Some((score, it.clone()));
                break;
            }
            if dobj < 0.0 {
                let cr: Vec<RMatrix> = real.c.iter().zip(&rd).map(|(c, r)| c + r).collect();
                if SQRT_2 * frobenius(&cr) / -dobj < options.feas_tol {
                    history.push(record);
                    status = SolveStatus::Infeasible;
                    let mut y = vec![0.0; real.rows.len()];
                    for (k, &j) in self.kept.iter().enumerate() {
                        y[j] = it.y[k] / -dobj;
                    }
                    certificate = Some(Certificate::PrimalInfeasible { y });
                    best = Some((score, it.clone()));
                    break;
                }
            }
            if pobj > 0.0 && (&self.b - &rp).norm() / pobj < options.feas_tol {
                history.push(record);
                status = SolveStatus::Unbounded;
                let x = it.x.iter().map(|x| hermitian_part(&unembed_variable(&(x / pobj)))).collect();
                certificate = Some(Certificate::DualInfeasible { x });
                best = Some((score, it.clone()));
                break;
            }
            if iter == options.max_iter {
                history.push(record);
                break;
            }

            let Some(step) = self.newton_step(&it, &rd, &rp, xs) else {
                history.push(record);
                status = SolveStatus::Stalled;
                break;
            };
            let (alpha, beta, sigma, d) = step;
            record.primal_step = alpha;
            record.dual_step = beta;
            record.centering = sigma;
            history.push(record);
            for i in 0..it.x.len() {
                it.x[i] += &d.dx[i] * alpha;
                it.s[i] += &d.ds[i] * beta;
            }
            it.y += &d.dy * beta;
            if alpha < STALL_STEP && beta < STALL_STEP {
                stalls += 1;
                if stalls >= STALL_LIMIT {
                    status = SolveStatus::Stalled;
                    break;
                }
            } else {
                stalls = 0;
            }
        }

        let iterate = best.map(|(_, it)| it).unwrap_or(it);
        let solution = finish(problem, real, self.kept, iterate, status, removed, iterations, history);
        match certificate {
            Some(c) => solution.with_certificate(c),
            None => solution,
        }
    }

    fn newton_step(
        &self,
        it: &Iterate,
        rd: &[RMatrix],
        rp: &DVector<f64>,
        xs: f64,
    ) -> Option<(f64, f64, f64, Direction)> {
        let z: Vec<RMatrix> = it.s.iter().map(inverse_spd).collect::<Option<_>>()?;
        let factor = Factor::new(self.schur(&it.x, &z))?;
        let xrdz: Vec<RMatrix> = (0..it.x.len()).map(|i| &it.x[i] * &rd[i] * &z[i]).collect();

        let g: Vec<RMatrix> = it.x.iter().map(|x| -x).collect();
        let pred = self.direction(&factor, it, &z, &g, &xrdz, rd, rp)?;
        let (ap, bp) = Self::steps(it, &pred)?;
        let (ap, bp) = (ap.min(1.0), bp.min(1.0));
        let mu = xs / self.n_total;
        let mu_aff: f64 = (0..it.x.len())
            .map(|i| (&it.x[i] + &pred.dx[i] * ap).dot(&(&it.s[i] + &pred.ds[i] * bp)))
            .sum::<f64>()
            / self.n_total;
        let expon = 1f64.max(3.0 * ap.min(bp).powi(2));
        let sigma = (mu_aff.max(0.0) / mu).powf(expon).min(1.0);

        let g: Vec<RMatrix> = (0..it.x.len())
            .map(|i| &z[i] * (sigma * mu) - &it.x[i] - &pred.dx[i] * &pred.ds[i] * &z[i])
            .collect();
        let corr = self.direction(&factor, it, &z, &g, &xrdz, rd, rp)?;
        let (a, b) = Self::steps(it, &corr)?;
        let gamma = 0.9 + 0.09 * ap.min(bp);
        let alpha = (gamma * a).min(1.0);
        let beta = (gamma * b).min(1.0);
        Some((alpha, beta, sigma, corr))
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    problem: &SdpProblem,
    real: &RealProblem,
    kept: &[usize],
    it: Iterate,
    status: SolveStatus,
    removed: Vec<usize>,
    iterations: usize,
    history: Vec<IterationRecord>,
) -> SdpSolution {
    let x: Vec<_> = it.x.iter().map(|m| hermitian_part(&unembed_variable(m))).collect();
    let s: Vec<_> = it.s.iter().map(|m| hermitian_part(&unembed_coefficient(m))).collect();
    let mut y = vec![0.0; real.rows.len()];
    for (k, &j) in kept.iter().enumerate() {
        y[j] = it.y[k];
    }
    let r = recompute(problem, &x, &y, &s);
    SdpSolution {
        status,
        x,
        y,
        s,
        primal_objective: r.primal_objective,
        dual_objective: r.dual_objective,
        gap: r.dual_objective - r.primal_objective,
        primal_residual: r.primal_residual,
        dual_residual: r.dual_residual,
        iterations,
        removed_rows: removed,
        certificate: None,
        history,
    }
}

impl SdpSolution {
    fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }
}
