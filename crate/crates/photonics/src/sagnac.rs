//! Four-level preparation in a two-path interferometer.
//!
//! Optical mode `2·path + pol` carries logical level `k`, with path 0 ↔ a, path 1 ↔ b and
//! pol 0 ↔ H. The reflection phase of the recombining beam splitter makes path b lag by
//! `i` relative to the logical basis, see [`mode_frame`].

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ctxdim_core::linalg::{c, CMatrix, CVector};
use ctxdim_core::random::rng_from_seed;

use crate::error::{Error, Result};

/// Residuals above this mark a target outside the reachable family.
pub const REACHABILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparationParams {
    /// Degrees.
    pub alpha: f64,
    /// Degrees.
    pub beta: f64,
    /// Radians.
    pub phi1: f64,
    /// Radians.
    pub phi2: f64,
    /// Radians.
    pub pp: f64,
}

impl PreparationParams {
    pub fn new(alpha: f64, beta: f64, phi1: f64, phi2: f64, pp: f64) -> Self {
        Self { alpha, beta, phi1, phi2, pp }
    }

    fn to_vec(self) -> Vec<f64> {
        vec![self.alpha, self.beta, self.phi1, self.phi2, self.pp]
    }

    fn from_slice(p: &[f64]) -> Self {
        Self::new(p[0], p[1], p[2], p[3], p[4])
    }

    pub fn is_finite(&self) -> bool {
        self.to_vec().iter().all(|v| v.is_finite())
    }

    /// Representative with non-negative amplitudes (`α, β ∈ [0°, 45°]`) and the `|H,a⟩`
    /// amplitude real, for any balanced two-path ket.
    pub fn from_state(ket: &CVector) -> Self {
        let arg = |z: Complex64| if z.norm() == 0.0 { 0.0 } else { z.arg() };
        let alpha = 0.5 * ket[1].norm().atan2(ket[0].norm()).to_degrees();
        let beta = 0.5 * ket[3].norm().atan2(ket[2].norm()).to_degrees();
        let g = arg(ket[0]);
        Self::new(alpha, beta, arg(ket[1]) - g, arg(ket[3]) - arg(ket[2]), arg(ket[2]) - g).wrapped()
    }

    /// Phases wrapped into `(−π, π]`, angles into `(−90°, 90°]`.
    pub fn wrapped(&self) -> Self {
        Self::new(wrap(self.alpha, 180.0), wrap(self.beta, 180.0), wrap(self.phi1, 2.0 * PI), wrap(self.phi2, 2.0 * PI), wrap(self.pp, 2.0 * PI))
    }
}

fn wrap(v: f64, period: f64) -> f64 {
    let half = 0.5 * period;
    let w = (v + half).rem_euclid(period) - half;
    if w == -half {
        half
    } else {
        w
    }
}

/// `(1/√2)(cos2α, e^{iφ₁}sin2α, e^{iPP}cos2β, e^{i(PP+φ₂)}sin2β)` in the mode basis.
pub fn sagnac_prepare(p: &PreparationParams) -> CVector {
    let (sa, ca) = (2.0 * p.alpha.to_radians()).sin_cos();
    let (sb, cb) = (2.0 * p.beta.to_radians()).sin_cos();
    CVector::from_vec(vec![
        c(ca * FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(sa * FRAC_1_SQRT_2, p.phi1),
        Complex64::from_polar(cb * FRAC_1_SQRT_2, p.pp),
        Complex64::from_polar(sb * FRAC_1_SQRT_2, p.pp + p.phi2),
    ])
}

/// `diag(1, 1, i, i)`: maps logical kets to mode amplitudes.
pub fn mode_frame() -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0)]))
}

pub fn logical_to_mode(ket: &CVector) -> CVector {
    mode_frame() * ket
}

/// Phase (radians) set by a half-wave plate at `angle` degrees between two quarter-wave plates at 45°.
pub fn retarder_phase(angle: f64) -> f64 {
    wrap((4.0 * angle + 180.0).to_radians(), 2.0 * PI)
}

/// Best overlap any balanced two-path state can reach: `(‖t_a‖ + ‖t_b‖)² / 2`.
pub fn reachable_overlap(target: &CVector) -> f64 {
    let na = (target[0].norm_sqr() + target[1].norm_sqr()).sqrt();
    let nb = (target[2].norm_sqr() + target[3].norm_sqr()).sqrt();
    0.5 * (na + nb).powi(2) / target.norm_squared()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iters: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { starts: 8, seed: 0, max_iters: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: PreparationParams,
    /// `1 − |⟨target|state⟩|²`.
    pub residual: f64,
}

impl FitResult {
    pub fn is_reachable(&self) -> bool {
        self.residual <= REACHABILITY_TOL
    }
}

struct Infidelity<'a> {
    target: &'a CVector,
}

impl CostFunction for Infidelity<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let state = sagnac_prepare(&PreparationParams::from_slice(p));
        Ok(1.0 - self.target.dotc(&state).norm_sqr())
    }
}

fn simplex(center: &[f64], steps: &[f64]) -> Vec<Vec<f64>> {
    let mut vertices = vec![center.to_vec()];
    for (i, s) in steps.iter().enumerate() {
        let mut v = center.to_vec();
        v[i] += s;
        vertices.push(v);
    }
    vertices
}

fn local_search(target: &CVector, start: Vec<f64>, steps: &[f64], max_iters: u64) -> Result<(Vec<f64>, f64)> {
    let solver = NelderMead::new(simplex(&start, steps))
        .with_sd_tolerance(1e-15)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let res = Executor::new(Infidelity { target }, solver)
        .configure(|s| s.max_iters(max_iters))
        .run()
        .map_err(|e| Error::Fit(e.to_string()))?;
    let best = res.state().best_param.clone().ok_or_else(|| Error::Fit("no iterate".into()))?;
    Ok((best, res.state().best_cost))
}

/// Multi-start Nelder–Mead fit of the preparation family to a unit `target` in the mode basis.
///
/// Each start is refined twice, the second time from a fresh small simplex.
pub fn fit_preparation(target: &CVector, options: &FitOptions) -> Result<FitResult> {
    if target.len() != 4 {
        return Err(Error::Shape { expected: 4, found: target.len() });
    }
    let norm = target.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Setup(format!("target must be a unit vector (norm {norm})")));
    }
    let mut rng = rng_from_seed(options.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..options.starts.max(1) {
        let start = vec![
            rng.random_range(0.0..90.0),
            rng.random_range(0.0..90.0),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        ];
        let (p, _) = local_search(target, start, &[10.0, 10.0, 0.5, 0.5, 0.5], options.max_iters)?;
        let (p, cost) = local_search(target, p, &[1e-3, 1e-3, 1e-4, 1e-4, 1e-4], options.max_iters)?;
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((p, cost));
        }
    }
    let (p, _) = best.expect("at least one start");
    let params = PreparationParams::from_state(&sagnac_prepare(&PreparationParams::from_slice(&p)));
    let residual = (1.0 - target.dotc(&sagnac_prepare(&params)).norm_sqr()).max(0.0);
    Ok(FitResult { params, residual })
}
