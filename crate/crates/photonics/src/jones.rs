//! Jones calculus for half- and quarter-wave plates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use ctxdim_core::linalg::{c, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlateKind {
    Half,
    Quarter,
}

/// A wave plate with its fast axis at `angle` degrees from horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePlate {
    pub kind: PlateKind,
    pub angle: f64,
}

impl WavePlate {
    pub fn half(angle: f64) -> Self {
        Self { kind: PlateKind::Half, angle }
    }

    pub fn quarter(angle: f64) -> Self {
        Self { kind: PlateKind::Quarter, angle }
    }

    pub fn matrix(&self) -> CMatrix {
        jones(self)
    }
}

fn rotation(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// `R(θ)·diag(1, e^{iδ})·R(−θ)` with the H–H entry rotated onto the non-negative real axis.
pub fn jones(plate: &WavePlate) -> CMatrix {
    let theta = plate.angle.to_radians();
    let retarder = match plate.kind {
        PlateKind::Half => c(-1.0, 0.0),
        PlateKind::Quarter => c(0.0, 1.0),
    };
    let d = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), retarder]);
    let m = rotation(theta) * d * rotation(-theta);
    let hh = m[(0, 0)];
    if hh.norm() == 0.0 {
        return m;
    }
    m * Complex64::from_polar(1.0, -hh.arg())
}

/// Apply plates in the order the light meets them.
pub fn train(plates: &[WavePlate]) -> CMatrix {
    plates.iter().fold(ctxdim_core::linalg::identity(2), |acc, p| jones(p) * acc)
}
