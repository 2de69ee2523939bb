//! The two half-step programs: optimal preparations for fixed measurements and
//! optimal measurements for fixed preparations.

use num_complex::Complex64;

use ctxdim_core::behavior::behavior_from;
use ctxdim_core::eigen::eigh;
use ctxdim_core::functional::InequalityFunctional;
use ctxdim_core::linalg::{hermitian_part, identity, partial_transpose, CMatrix, Subsystem};
use ctxdim_core::quantum::{Assemblage, Povm};
use ctxdim_sdp::{solve, SdpProblem, SdpSolution, SolveOptions, SolveStatus};

use crate::error::{Error, Result};

/// Tensor split of the preparation space used for the PPT constraint.
pub const LOCAL_DIMS: (usize, usize) = (2, 2);
pub const DIM: usize = LOCAL_DIMS.0 * LOCAL_DIMS.1;

/// Real basis of `d×d` Hermitian matrices: diagonal units, then symmetric and
/// antisymmetric off-diagonal pairs.
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        out.push(m);
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(k, l)] = Complex64::new(1.0, 0.0);
            s[(l, k)] = Complex64::new(1.0, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(k, l)] = Complex64::new(0.0, 1.0);
            a[(l, k)] = Complex64::new(0.0, -1.0);
            out.push(a);
        }
    }
    out
}

fn psd_clip(m: &CMatrix) -> CMatrix {
    eigh(&hermitian_part(m)).map(|l| l.max(0.0))
}

fn inverse_sqrt(m: &CMatrix) -> CMatrix {
    let e = eigh(m);
    let cutoff = 1e-14 * e.max().max(0.0);
    e.map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 })
}

fn sqrt_psd(m: &CMatrix) -> CMatrix {
    eigh(m).map(|l| l.max(0.0).sqrt())
}

fn require_optimal(program: &'static str, s: &SdpSolution) -> Result<()> {
    if s.status == SolveStatus::Optimal {
        Ok(())
    } else {
        Err(Error::Solver {
            program,
            status: s.status,
            gap: s.gap,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
        })
    }
}

fn check_shape(f: &InequalityFunctional, x: usize, a: usize, y: usize, b: usize) -> Result<()> {
    let s = f.scenario();
    if (s.settings_x, s.outcomes_a, s.settings_y, s.outcomes_b) != (x, a, y, b) {
        return Err(Error::Shape {
            expected: s.to_string(),
            found: format!("x={x} a={a} y={y} b={b}"),
        });
    }
    Ok(())
}

/// Projects solver output onto valid POVMs: clip to PSD, then `M_b ↦ T^{-1/2} M_b T^{-1/2}`.
pub fn normalize_povm(effects: &[CMatrix]) -> Result<Povm> {
    let clipped: Vec<CMatrix> = effects.iter().map(psd_clip).collect();
    let total = clipped.iter().fold(CMatrix::zeros(DIM, DIM), |acc, m| acc + m);
    let w = inverse_sqrt(&total);
    Ok(Povm::from_matrices(clipped.iter().map(|m| hermitian_part(&(&w * m * &w))).collect())?)
}

/// Projects solver output onto a valid assemblage: clip to PSD, then rescale each
/// setting by a congruence so every marginal equals the common trace-one `σ_*`.
pub fn normalize_assemblage(sigmas: &[Vec<CMatrix>]) -> Result<Assemblage> {
    let clipped: Vec<Vec<CMatrix>> = sigmas.iter().map(|row| row.iter().map(psd_clip).collect()).collect();
    let marginals: Vec<CMatrix> = clipped
        .iter()
        .map(|row| row.iter().fold(CMatrix::zeros(DIM, DIM), |acc, m| acc + m))
        .collect();
    let mean = marginals.iter().fold(CMatrix::zeros(DIM, DIM), |acc, m| acc + m);
    let star = hermitian_part(&mean.unscale(mean.trace().re));
    let root = sqrt_psd(&star);
    let out = clipped
        .iter()
        .zip(&marginals)
        .map(|(row, marginal)| {
            let b = &root * inverse_sqrt(marginal);
            row.iter().map(|m| hermitian_part(&(&b * m * b.adjoint()))).collect()
        })
        .collect();
    Ok(Assemblage::from_matrices(out)?)
}

/// Program over `σ_{a|x}` (blocks `x·n_a + a`), followed by the PPT partners when `ppt`.
pub fn preparation_program(functional: &InequalityFunctional, povms: &[Povm], ppt: bool) -> Result<SdpProblem> {
    let scenario = functional.scenario();
    let (nx, na) = (scenario.settings_x, scenario.outcomes_a);
    check_shape(functional, nx, na, povms.len(), povms.first().map_or(0, Povm::outcomes))?;
    if let Some(p) = povms.iter().find(|p| p.dim() != DIM) {
        return Err(Error::Shape { expected: format!("dimension {DIM}"), found: format!("dimension {}", p.dim()) });
    }

    let mut sdp = SdpProblem::new();
    let block = |a: usize, x: usize| x * na + a;
    for x in 0..nx {
        for a in 0..na {
            let mut c = CMatrix::zeros(DIM, DIM);
            for (y, povm) in povms.iter().enumerate() {
                for b in 0..scenario.outcomes_b {
                    let w = functional.coefficient(a, b, x, y);
                    if w != 0.0 {
                        c += povm.effect(b).matrix().scale(w);
                    }
                }
            }
            let i = sdp.add_block(format!("sigma_{a}_{x}"), DIM);
            sdp.set_objective(i, c);
        }
    }
    let basis = hermitian_basis(DIM);
    for x in 1..nx {
        for e in &basis {
            let mut terms: Vec<_> = (0..na).map(|a| (block(a, 0), e.clone())).collect();
            terms.extend((0..na).map(|a| (block(a, x), -e)));
            sdp.add_constraint(terms, 0.0);
        }
    }
    sdp.add_constraint((0..na).map(|a| (block(a, 0), identity(DIM))).collect(), 1.0);
    if ppt {
        let transposed: Vec<CMatrix> = basis
            .iter()
            .map(|e| partial_transpose(e, Subsystem::First, LOCAL_DIMS))
            .collect::<std::result::Result<_, _>>()?;
        for x in 0..nx {
            for a in 0..na {
                let y_block = sdp.add_block(format!("ppt_{a}_{x}"), DIM);
                for (e, et) in basis.iter().zip(&transposed) {
                    sdp.add_constraint(vec![(block(a, x), et.clone()), (y_block, -e)], 0.0);
                }
            }
        }
    }
    Ok(sdp)
}

/// `max_σ I(σ, M)` over assemblages, optionally with `σ_{a|x}^{⊺₁} ⪰ 0`.
pub fn optimize_preparations(
    functional: &InequalityFunctional,
    povms: &[Povm],
    ppt: bool,
) -> Result<(Assemblage, f64)> {
    let sdp = preparation_program(functional, povms, ppt)?;
    let scenario = functional.scenario();
    let (nx, na) = (scenario.settings_x, scenario.outcomes_a);
    let block = |a: usize, x: usize| x * na + a;
    let sol = solve(&sdp, &SolveOptions::default())?;
    require_optimal("preparation", &sol)?;
    let sigmas: Vec<Vec<CMatrix>> = (0..nx).map(|x| (0..na).map(|a| sol.x[block(a, x)].clone()).collect()).collect();
    let assemblage = normalize_assemblage(&sigmas)?;
    let value = functional.evaluate(&behavior_from(&assemblage, povms)?)?;
    Ok((assemblage, value))
}

/// Program over `M_{b|y}` (blocks `y·n_b + b`).
pub fn measurement_program(functional: &InequalityFunctional, assemblage: &Assemblage) -> Result<SdpProblem> {
    let scenario = functional.scenario();
    let (ny, nb) = (scenario.settings_y, scenario.outcomes_b);
    check_shape(functional, assemblage.settings(), assemblage.outcomes(), ny, nb)?;
    let d = assemblage.dim();

    let mut sdp = SdpProblem::new();
    for y in 0..ny {
        for b in 0..nb {
            let mut c = CMatrix::zeros(d, d);
            for x in 0..scenario.settings_x {
                for a in 0..scenario.outcomes_a {
                    let w = functional.coefficient(a, b, x, y);
                    if w != 0.0 {
                        c += assemblage.sigma(a, x).matrix().scale(w);
                    }
                }
            }
            let i = sdp.add_block(format!("effect_{b}_{y}"), d);
            sdp.set_objective(i, c);
        }
    }
    for y in 0..ny {
        for e in hermitian_basis(d) {
            let rhs = e.trace().re;
            sdp.add_constraint((0..nb).map(|b| (y * nb + b, e.clone())).collect(), rhs);
        }
    }
    Ok(sdp)
}

/// `max_M I(σ, M)` over POVMs for a fixed assemblage.
pub fn optimize_measurements(functional: &InequalityFunctional, assemblage: &Assemblage) -> Result<(Vec<Povm>, f64)> {
    let sdp = measurement_program(functional, assemblage)?;
    let (ny, nb) = (functional.scenario().settings_y, functional.scenario().outcomes_b);
    let sol = solve(&sdp, &SolveOptions::default())?;
    require_optimal("measurement", &sol)?;
    let povms = (0..ny)
        .map(|y| normalize_povm(&sol.x[y * nb..(y + 1) * nb]))
        .collect::<Result<Vec<_>>>()?;
    let value = functional.evaluate(&behavior_from(assemblage, &povms)?)?;
    Ok((povms, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctxdim_core::linalg::trace_product;

    #[test]
    fn basis_spans_hermitian_matrices() {
        let basis = hermitian_basis(3);
        assert_eq!(basis.len(), 9);
        for (i, p) in basis.iter().enumerate() {
            for (j, q) in basis.iter().enumerate() {
                let g = trace_product(p, q);
                let want = if i != j { 0.0 } else if i < 3 { 1.0 } else { 2.0 };
                assert!((g.re - want).abs() < 1e-15 && g.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn normalization_repairs_small_defects() {
        let mut effects: Vec<CMatrix> = (0..4)
            .map(|k| {
                let mut m = CMatrix::zeros(4, 4);
                m[(k, k)] = Complex64::new(1.0 + 1e-8, 0.0);
                m
            })
            .collect();
        effects[0][(1, 1)] = Complex64::new(-1e-9, 0.0);
        assert!(normalize_povm(&effects).is_ok());
    }
}
