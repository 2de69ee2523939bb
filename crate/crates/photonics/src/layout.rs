//! Complete optical layouts with the plates that noise acts on.

use serde::{Deserialize, Serialize};

use ctxdim_core::{Behavior, Scenario};

use crate::error::{Error, Result};
use crate::noise::PlateRole;
use crate::predict::{predict_behavior, predict_polarization};
use crate::sagnac::PreparationParams;
use crate::station::{ArmSetting, DetectorMap, StationSetting};

/// A plate and the change of its parameter per degree of misalignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plate {
    pub role: PlateRole,
    pub gain: f64,
}

const DEG: f64 = std::f64::consts::PI / 180.0;

/// Ququart layout: eight preparations ordered `x·4 + a`, one station per setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SagnacLayout {
    pub preparations: Vec<PreparationParams>,
    pub stations: Vec<StationSetting>,
    #[serde(default)]
    pub detectors: DetectorMap,
}

/// Qubit layout: preparation half-wave plates `[x][a]`, analyzer half-wave plates per setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationLayout {
    pub preparation_hwp: [[f64; 2]; 2],
    pub measurement_hwp: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Sagnac(SagnacLayout),
    Polarization(PolarizationLayout),
}

impl SagnacLayout {
    pub fn new(preparations: Vec<PreparationParams>, stations: Vec<StationSetting>) -> Result<Self> {
        let layout = Self { preparations, stations, detectors: DetectorMap::STANDARD };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.preparations.len() != 8 {
            return Err(Error::Shape { expected: 8, found: self.preparations.len() });
        }
        if self.stations.len() != 2 {
            return Err(Error::Shape { expected: 2, found: self.stations.len() });
        }
        if !self.preparations.iter().all(PreparationParams::is_finite) || !self.stations.iter().all(StationSetting::is_finite) {
            return Err(Error::Setup("non-finite angle or phase".into()));
        }
        Ok(())
    }

    fn perturbed(&self, offsets: &[f64]) -> (Vec<PreparationParams>, Vec<StationSetting>) {
        let mut it = offsets.iter();
        let mut next = || *it.next().expect("one offset per plate");
        let preps = self
            .preparations
            .iter()
            .map(|p| PreparationParams::new(p.alpha + next(), p.beta + next(), p.phi1 + next(), p.phi2 + next(), p.pp + next()))
            .collect();
        let stations = self
            .stations
            .iter()
            .map(|s| StationSetting {
                a: ArmSetting::new(s.a.qwp + next(), s.a.hwp + next()),
                b: ArmSetting::new(s.b.qwp + next(), s.b.hwp + next()),
                recombination_phase: s.recombination_phase,
            })
            .collect();
        (preps, stations)
    }
}

impl Layout {
    pub fn scenario(&self) -> Scenario {
        match self {
            Layout::Sagnac(_) => Scenario::CGLMP4,
            Layout::Polarization(_) => Scenario::CHSH,
        }
    }

    /// Plates in the order [`Layout::behavior_with`] expects offsets.
    ///
    /// Per preparation: α plate, β plate, φ₁ and φ₂ retarders (phase 4θ), phase plate.
    /// Per station: QWP and HWP of arm a, then of arm b.
    pub fn plates(&self) -> Vec<Plate> {
        match self {
            Layout::Sagnac(s) => {
                let prep = [
                    Plate { role: PlateRole::PreparationHwp, gain: 1.0 },
                    Plate { role: PlateRole::PreparationHwp, gain: 1.0 },
                    Plate { role: PlateRole::Retarder, gain: 4.0 * DEG },
                    Plate { role: PlateRole::Retarder, gain: 4.0 * DEG },
                    Plate { role: PlateRole::PhasePlate, gain: DEG },
                ];
                let station = [
                    Plate { role: PlateRole::StationQwp, gain: 1.0 },
                    Plate { role: PlateRole::StationHwp, gain: 1.0 },
                    Plate { role: PlateRole::StationQwp, gain: 1.0 },
                    Plate { role: PlateRole::StationHwp, gain: 1.0 },
                ];
                let mut plates: Vec<Plate> = s.preparations.iter().flat_map(|_| prep).collect();
                plates.extend(s.stations.iter().flat_map(|_| station));
                plates
            }
            Layout::Polarization(_) => {
                let mut plates = vec![Plate { role: PlateRole::PreparationHwp, gain: 1.0 }; 4];
                plates.extend([Plate { role: PlateRole::StationHwp, gain: 1.0 }; 2]);
                plates
            }
        }
    }

    pub fn behavior(&self) -> Result<Behavior> {
        self.behavior_with(&vec![0.0; self.plates().len()])
    }

    /// Behavior with each plate's parameter shifted by `gain·offset`.
    pub fn behavior_with(&self, offsets: &[f64]) -> Result<Behavior> {
        let plates = self.plates();
        if offsets.len() != plates.len() {
            return Err(Error::Shape { expected: plates.len(), found: offsets.len() });
        }
        let shifts: Vec<f64> = plates.iter().zip(offsets).map(|(p, o)| p.gain * o).collect();
        match self {
            Layout::Sagnac(s) => {
                let (preps, stations) = s.perturbed(&shifts);
                predict_behavior(&preps, &stations, &s.detectors)
            }
            Layout::Polarization(p) => {
                let prep = [[p.preparation_hwp[0][0] + shifts[0], p.preparation_hwp[0][1] + shifts[1]], [
                    p.preparation_hwp[1][0] + shifts[2],
                    p.preparation_hwp[1][1] + shifts[3],
                ]];
                let meas = [p.measurement_hwp[0] + shifts[4], p.measurement_hwp[1] + shifts[5]];
                predict_polarization(&prep, &meas)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctxdim_core::canonical::{CHSH_MEASUREMENT_HWP, CHSH_PREPARATION_HWP};

    fn chsh() -> Layout {
        Layout::Polarization(PolarizationLayout { preparation_hwp: CHSH_PREPARATION_HWP, measurement_hwp: CHSH_MEASUREMENT_HWP })
    }

    #[test]
    fn plate_counts() {
        assert_eq!(chsh().plates().len(), 6);
        let st = StationSetting::new(ArmSetting::new(0.0, 0.0), ArmSetting::new(0.0, 0.0));
        let s = SagnacLayout::new(vec![PreparationParams::new(0.0, 0.0, 0.0, 0.0, 0.0); 8], vec![st; 2]).unwrap();
        assert_eq!(Layout::Sagnac(s).plates().len(), 48);
    }

    #[test]
    fn offsets_must_match_plates() {
        assert!(chsh().behavior_with(&[0.0; 5]).is_err());
    }

    #[test]
    fn retarder_gain_is_four_degrees_per_degree() {
        let st = StationSetting::new(ArmSetting::new(0.0, 0.0), ArmSetting::new(0.0, 0.0));
        let layout = SagnacLayout::new(vec![PreparationParams::new(10.0, 20.0, 0.0, 0.0, 0.0); 8], vec![st; 2]).unwrap();
        let mut offsets = vec![0.0; 48];
        offsets[2] = 1.0;
        let (preps, _) = layout.perturbed(&Layout::Sagnac(layout.clone()).plates().iter().zip(&offsets).map(|(p, o)| p.gain * o).collect::<Vec<_>>());
        assert!((preps[0].phi1 - 4.0 * DEG).abs() < 1e-15);
        assert_eq!(preps[1], layout.preparations[1]);
    }
}
