//! Detection of linearly dependent constraint rows by modified Gram-Schmidt.
//!
//! Rows are compared in isometric Hermitian coordinates (diagonal, then `√2·Re` and
//! `√2·Im` of the upper triangle). Basis vectors remember which blocks they touch
//! so rows on disjoint blocks skip the inner product.

use std::f64::consts::SQRT_2;

use crate::problem::SdpProblem;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Presolve {
    Reduced { kept: Vec<usize>, removed: Vec<usize> },
    /// `y` with `Σ_j y_j A_j ≈ 0` and `bᵀy = −1`.
    Inconsistent { certificate: Vec<f64> },
}

struct Row {
    values: Vec<f64>,
    blocks: Vec<bool>,
}

fn hermitian_coordinates(p: &SdpProblem, j: usize, offsets: &[usize], total: usize) -> Row {
    let mut values = vec![0.0; total];
    let mut blocks = vec![false; p.blocks.len()];
    for (i, a) in &p.constraints[j].terms {
        blocks[*i] = true;
        let d = a.nrows();
        let mut k = offsets[*i];
        for r in 0..d {
            values[k] += a[(r, r)].re;
            k += 1;
        }
        for r in 0..d {
            for c in r + 1..d {
                values[k] += SQRT_2 * a[(r, c)].re;
                values[k + 1] += SQRT_2 * a[(r, c)].im;
                k += 2;
            }
        }
    }
    Row { values, blocks }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn overlaps(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).any(|(x, y)| *x && *y)
}

/// Rows whose residual after projection falls below `rank_tol·‖a_j‖` are dropped; a dropped
/// row whose rhs disagrees with the combination of kept rows by more than `rhs_tol` makes
/// the system inconsistent.
pub(crate) fn presolve(p: &SdpProblem, rank_tol: f64, rhs_tol: f64) -> Presolve {
    gram_schmidt(p, rank_tol, rhs_tol, false)
}

fn gram_schmidt(p: &SdpProblem, rank_tol: f64, rhs_tol: f64, track: bool) -> Presolve {
    let m = p.constraints.len();
    let offsets: Vec<usize> = p
        .blocks
        .iter()
        .scan(0, |acc, b| {
            let start = *acc;
            *acc += b.dim * b.dim;
            Some(start)
        })
        .collect();
    let total: usize = p.blocks.iter().map(|b| b.dim * b.dim).sum();

    // orthonormal basis, the rhs each basis vector implies, and (when tracking)
    // its expansion in original rows
    let mut basis: Vec<Row> = Vec::new();
    let mut implied: Vec<f64> = Vec::new();
    let mut expansion: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for j in 0..m {
        let mut v = hermitian_coordinates(p, j, &offsets, total);
        let norm = dot(&v.values, &v.values).sqrt();
        let mut rhs = p.constraints[j].rhs;
        let mut t = if track {
            let mut t = vec![0.0; m];
            t[j] = 1.0;
            t
        } else {
            Vec::new()
        };
        for _pass in 0..2 {
            for (k, q) in basis.iter().enumerate() {
                if !overlaps(&q.blocks, &v.blocks) {
                    continue;
                }
                let h = dot(&v.values, &q.values);
                axpy(-h, &q.values, &mut v.values);
                if h != 0.0 {
                    for (mine, theirs) in v.blocks.iter_mut().zip(&q.blocks) {
                        *mine |= *theirs;
                    }
                }
                rhs -= h * implied[k];
                if track {
                    axpy(-h, &expansion[k], &mut t);
                }
            }
        }
        let residual = dot(&v.values, &v.values).sqrt();
        if residual <= rank_tol * norm || norm == 0.0 {
            if rhs.abs() > rhs_tol {
                if !track {
                    return gram_schmidt(p, rank_tol, rhs_tol, true);
                }
                let scale = -1.0 / rhs;
                return Presolve::Inconsistent { certificate: t.iter().map(|x| x * scale).collect() };
            }
            removed.push(j);
        } else {
            v.values.iter_mut().for_each(|x| *x /= residual);
            implied.push(rhs / residual);
            if track {
                t.iter_mut().for_each(|x| *x /= residual);
                expansion.push(t);
            }
            basis.push(v);
            kept.push(j);
        }
    }
    Presolve::Reduced { kept, removed }
}
