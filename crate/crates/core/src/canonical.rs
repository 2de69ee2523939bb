//! Reference setups: the ququart CGLMP optimum, its best separable counterpart,
//! and the Tsirelson point for CHSH.
//!
//! Outcome labels of the ququart setups run in the decreasing cyclic direction
//! (`a ↦ −a mod 4` relative to the textbook phase convention); with that labeling
//! the functional value is maximal and the probability tables line up with the
//! experimental tables entry by entry.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use crate::error::Result;
use crate::linalg::{c, phase, CVector};
use crate::quantum::{Assemblage, HermitianOperator, Povm};

const PREPARATION_PHASES: [f64; 2] = [-FRAC_PI_8, FRAC_PI_8];
const MEASUREMENT_PHASES: [f64; 2] = [0.0, FRAC_PI_4];

fn mirrored(label: usize) -> f64 {
    ((4 - label % 4) % 4) as f64
}

/// Mixing angle of the optimal amplitudes, in radians.
pub fn mixing_angle() -> f64 {
    let s = FRAC_PI_8.sin();
    0.5 * ((1.0 + 2.0 * s) / (6.0 * s * s + 4.0 * s + 1.0).sqrt()).asin()
}

fn optimal_amplitudes() -> [f64; 4] {
    let t = mixing_angle();
    [t.cos(), t.sin(), t.sin(), t.cos()]
}

/// Unit ket of the optimal preparation `(a|x)`.
pub fn optimal_preparation_ket(a: usize, x: usize) -> CVector {
    let s = optimal_amplitudes();
    let w = FRAC_PI_2 * mirrored(a) - PREPARATION_PHASES[x];
    CVector::from_iterator(4, (0..4).map(|k| phase(w * k as f64) * (s[k] * FRAC_1_SQRT_2)))
}

/// Unit ket of the optimal measurement outcome `(b|y)`.
pub fn optimal_measurement_ket(b: usize, y: usize) -> CVector {
    let w = FRAC_PI_2 * mirrored(b) + MEASUREMENT_PHASES[y];
    CVector::from_iterator(4, (0..4).map(|k| phase(w * k as f64) * 0.5))
}

/// Unit product ket `u ⊗ v` of the separable preparation `(a|x)`.
pub fn separable_preparation_ket(a: usize, x: usize) -> CVector {
    let sign = if x == 0 { 1.0 } else { -1.0 };
    let q = FRAC_PI_2 * mirrored(a);
    let u = CVector::from_vec(vec![
        phase(sign * FRAC_PI_8 + q) * FRAC_1_SQRT_2,
        phase(sign * 3.0 * FRAC_PI_8 - q) * FRAC_1_SQRT_2,
    ]);
    let v = CVector::from_vec(vec![phase(-(sign * FRAC_PI_8 + q)) * FRAC_1_SQRT_2, c(FRAC_1_SQRT_2, 0.0)]);
    u.kronecker(&v)
}

fn assemblage_from(ket: impl Fn(usize, usize) -> CVector, outcomes: usize) -> Result<Assemblage> {
    let weight = 1.0 / outcomes as f64;
    Assemblage::new(
        (0..2)
            .map(|x| (0..outcomes).map(|a| HermitianOperator::projector(&ket(a, x)).scale(weight)).collect())
            .collect(),
    )
}

pub fn optimal_measurements() -> Result<Vec<Povm>> {
    (0..2)
        .map(|y| Povm::from_kets(&(0..4).map(|b| optimal_measurement_ket(b, y)).collect::<Vec<_>>()))
        .collect()
}

pub fn canonical_cglmp4_optimal_setup() -> Result<(Assemblage, Vec<Povm>)> {
    Ok((assemblage_from(optimal_preparation_ket, 4)?, optimal_measurements()?))
}

pub fn canonical_cglmp4_separable_setup() -> Result<(Assemblage, Vec<Povm>)> {
    Ok((assemblage_from(separable_preparation_ket, 4)?, optimal_measurements()?))
}

/// Linear polarization at `angle` radians from horizontal.
pub fn linear_polarization(angle: f64) -> CVector {
    CVector::from_vec(vec![c(angle.cos(), 0.0), c(angle.sin(), 0.0)])
}

/// Half-wave-plate angles (degrees) that rotate `|H⟩` into the CHSH preparations, indexed `[x][a]`.
pub const CHSH_PREPARATION_HWP: [[f64; 2]; 2] = [[22.5, -22.5], [0.0, 45.0]];
/// Analyzer half-wave-plate angles (degrees) per measurement setting.
pub const CHSH_MEASUREMENT_HWP: [f64; 2] = [-78.75, 33.75];

/// Preparations `{D, A}` and `{H, V}`, analyzers at the tabulated wave-plate angles.
pub fn canonical_chsh_setup() -> Result<(Assemblage, Vec<Povm>)> {
    let deg = PI / 180.0;
    let ass = assemblage_from(|a, x| linear_polarization(2.0 * CHSH_PREPARATION_HWP[x][a] * deg), 2)?;
    let povms = CHSH_MEASUREMENT_HWP
        .iter()
        .map(|&t| {
            let pass = 2.0 * t * deg;
            Povm::from_kets(&[linear_polarization(pass), linear_polarization(pass + FRAC_PI_2)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ass, povms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::behavior_from;
    use crate::functional::{cglmp4_value, chsh_value};
    use crate::linalg::{max_norm, partial_transpose, Subsystem};
    use crate::quantum::{born_probability, is_psd};
    use num_complex::Complex64;

    #[test]
    fn mixing_angle_degrees() {
        assert!((mixing_angle().to_degrees() - 36.4782).abs() < 1e-4);
    }

    #[test]
    fn optimal_traces_and_marginal() {
        let (ass, povms) = canonical_cglmp4_optimal_setup().unwrap();
        for x in 0..2 {
            for a in 0..4 {
                assert!((ass.sigma(a, x).trace() - 0.25).abs() < 1e-14);
            }
        }
        let t = mixing_angle();
        let diag = [t.cos().powi(2), t.sin().powi(2), t.sin().powi(2), t.cos().powi(2)];
        for (i, d) in diag.iter().enumerate() {
            for j in 0..4 {
                let want = if i == j { 0.5 * d } else { 0.0 };
                assert!((ass.sigma_star().matrix()[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        for p in &povms {
            for (i, e) in p.effects().iter().enumerate() {
                for f in &p.effects()[i + 1..] {
                    assert!(max_norm(&(e.matrix() * f.matrix())) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn optimal_value() {
        let (ass, povms) = canonical_cglmp4_optimal_setup().unwrap();
        let v = cglmp4_value(&behavior_from(&ass, &povms).unwrap()).unwrap();
        assert!((v - 0.36476).abs() < 5e-4);
    }

    #[test]
    fn separable_value_and_ppt() {
        let (ass, povms) = canonical_cglmp4_separable_setup().unwrap();
        let v = cglmp4_value(&behavior_from(&ass, &povms).unwrap()).unwrap();
        assert!((v - 0.33609).abs() < 5e-4);
        for x in 0..2 {
            for a in 0..4 {
                let pt = partial_transpose(ass.sigma(a, x).matrix(), Subsystem::First, (2, 2)).unwrap();
                assert!(is_psd(&HermitianOperator::new(pt).unwrap(), 1e-9).0);
            }
        }
    }

    #[test]
    fn leading_born_entries() {
        let (ass, povms) = canonical_cglmp4_optimal_setup().unwrap();
        let p = 4.0 * born_probability(ass.sigma(0, 0), povms[0].effect(0)).unwrap();
        assert!((p - 0.7833).abs() < 5e-4);
        let (ass, povms) = canonical_cglmp4_separable_setup().unwrap();
        let p = 4.0 * born_probability(ass.sigma(0, 0), povms[0].effect(0)).unwrap();
        assert!((p - 0.8211).abs() < 5e-4);
    }

    #[test]
    fn chsh_tsirelson_point() {
        let (ass, povms) = canonical_chsh_setup().unwrap();
        for x in 0..2 {
            let m = ass.sigmas()[x][0].matrix() + ass.sigmas()[x][1].matrix();
            assert!(max_norm(&(m - crate::linalg::identity(2).unscale(2.0))) < 1e-15);
        }
        let b = behavior_from(&ass, &povms).unwrap();
        assert!((chsh_value(&b).unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
        // each signed term Tr(σ_{a|x}(M_{0|y} − M_{1|y})) has magnitude 1/(2√2)
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    let term = b.get(a, 0, x, y) - b.get(a, 1, x, y);
                    assert!((term.abs() - 0.3536).abs() < 1e-4);
                }
            }
        }
        for x in 0..2 {
            for y in 0..2 {
                let e = crate::functional::correlator(&b, x, y);
                assert!((e.abs() - FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }
}
