//! Measurement stations: beam-splitter recombination followed by per-port wave plates
//! and a polarizing beam splitter.
//!
//! Detector `2·port + pol` clicks for output port `port` (0 = c, 1 = d) and polarization
//! `pol` (0 = transmitted H, 1 = reflected V).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use ctxdim_core::linalg::{basis_ket, c, identity, CMatrix, CVector};
use ctxdim_core::Povm;

use crate::error::{Error, Result};
use crate::jones::{jones, WavePlate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSetting {
    /// Degrees.
    pub qwp: f64,
    /// Degrees.
    pub hwp: f64,
}

impl ArmSetting {
    pub fn new(qwp: f64, hwp: f64) -> Self {
        Self { qwp, hwp }
    }

    /// Light meets the QWP first.
    pub fn jones(&self) -> CMatrix {
        jones(&WavePlate::half(self.hwp)) * jones(&WavePlate::quarter(self.qwp))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationSetting {
    pub a: ArmSetting,
    pub b: ArmSetting,
    /// Extra phase (radians) on path b before recombination.
    #[serde(default)]
    pub recombination_phase: f64,
}

impl StationSetting {
    pub fn new(a: ArmSetting, b: ArmSetting) -> Self {
        Self { a, b, recombination_phase: 0.0 }
    }

    pub fn with_recombination_phase(mut self, phase: f64) -> Self {
        self.recombination_phase = phase;
        self
    }

    pub fn is_finite(&self) -> bool {
        [self.a.qwp, self.a.hwp, self.b.qwp, self.b.hwp, self.recombination_phase].iter().all(|v| v.is_finite())
    }
}

/// Symmetric 50/50 splitter, `i` on reflection; rows are output ports, columns input paths.
pub fn beam_splitter() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).scale(FRAC_1_SQRT_2)
}

fn block_diagonal(upper: &CMatrix, lower: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(upper);
    m.view_mut((2, 2), (2, 2)).copy_from(lower);
    m
}

/// Mode-to-detector unitary of a station.
pub fn optical_train(setting: &StationSetting) -> CMatrix {
    let phase = Complex64::from_polar(1.0, setting.recombination_phase);
    let shift = block_diagonal(&identity(2), &identity(2).scale(1.0).map(|z| z * phase));
    let bs = beam_splitter().kronecker(&identity(2));
    block_diagonal(&setting.a.jones(), &setting.b.jones()) * bs * shift
}

/// Pulled-back detector kets `U†|k⟩`, indexed by detector.
pub fn detector_kets(setting: &StationSetting) -> Vec<CVector> {
    let adj = optical_train(setting).adjoint();
    (0..4).map(|k| &adj * basis_ket(4, k)).collect()
}

/// Rank-one projective POVM on the mode space, effects indexed by detector.
pub fn station_povm(setting: &StationSetting) -> Result<Povm> {
    Ok(Povm::from_kets(&detector_kets(setting))?)
}

/// Which detector reports outcome `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DetectorMap([usize; 4]);

impl DetectorMap {
    /// Outcomes 0..3 on detectors c·H, d·H, c·V, d·V.
    pub const STANDARD: DetectorMap = DetectorMap([0, 2, 1, 3]);

    pub fn new(detectors: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &d in &detectors {
            if d >= 4 || seen[d] {
                return Err(Error::Setup(format!("detector map {detectors:?} is not a permutation of 0..4")));
            }
            seen[d] = true;
        }
        Ok(Self(detectors))
    }

    pub fn detector(&self, outcome: usize) -> usize {
        self.0[outcome]
    }

    pub fn detectors(&self) -> [usize; 4] {
        self.0
    }

    /// Reorder detector-indexed kets into outcome order.
    pub fn outcome_kets(&self, by_detector: &[CVector]) -> Vec<CVector> {
        self.0.iter().map(|&d| by_detector[d].clone()).collect()
    }
}

impl Default for DetectorMap {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl TryFrom<Vec<usize>> for DetectorMap {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        let arr: [usize; 4] = v.try_into().map_err(|v: Vec<usize>| Error::Shape { expected: 4, found: v.len() })?;
        Self::new(arr)
    }
}

impl From<DetectorMap> for Vec<usize> {
    fn from(m: DetectorMap) -> Self {
        m.0.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setting() -> StationSetting {
        StationSetting::new(ArmSetting::new(12.0, -33.0), ArmSetting::new(71.5, 4.25)).with_recombination_phase(0.4)
    }

    #[test]
    fn train_is_unitary() {
        let u = optical_train(&setting());
        assert!((u.adjoint() * &u - identity(4)).norm() < 1e-12);
    }

    #[test]
    fn beam_splitter_is_balanced() {
        let bs = beam_splitter();
        assert!(bs.iter().all(|z| (z.norm() - FRAC_1_SQRT_2).abs() < 1e-15));
        assert!((bs.adjoint() * &bs - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn detector_map_rejects_repeats() {
        assert!(DetectorMap::new([0, 0, 1, 2]).is_err());
        assert!(DetectorMap::new([0, 1, 2, 4]).is_err());
        assert!(DetectorMap::try_from(vec![0, 1, 2]).is_err());
        assert_eq!(DetectorMap::default().detector(1), 2);
    }

    #[test]
    fn relabeling_permutes_effects() {
        let kets = detector_kets(&setting());
        let map = DetectorMap::new([3, 1, 0, 2]).unwrap();
        let out = map.outcome_kets(&kets);
        for (b, ket) in out.iter().enumerate() {
            assert_eq!(ket, &kets[map.detector(b)]);
        }
    }
}
