//! Angle-noise and counting-statistics model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviceClass {
    Motorized,
    Manual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// Zero-mean normal with standard deviation σ.
    Gaussian,
    /// Uniform on `[−σ, σ]`.
    Uniform,
}

/// Which plates of a layout play which part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlateRole {
    /// Amplitude-setting half-wave plate of a preparation.
    PreparationHwp,
    /// Half-wave plate between two quarter-wave plates setting a polarization phase.
    Retarder,
    /// Tilted plate setting the phase between paths.
    PhasePlate,
    StationQwp,
    StationHwp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceClasses {
    pub preparation: DeviceClass,
    pub retarder: DeviceClass,
    pub phase_plate: DeviceClass,
    pub station: DeviceClass,
}

impl DeviceClasses {
    pub fn all(class: DeviceClass) -> Self {
        Self { preparation: class, retarder: class, phase_plate: class, station: class }
    }

    pub fn class_of(&self, role: PlateRole) -> DeviceClass {
        match role {
            PlateRole::PreparationHwp => self.preparation,
            PlateRole::Retarder => self.retarder,
            PlateRole::PhasePlate => self.phase_plate,
            PlateRole::StationQwp | PlateRole::StationHwp => self.station,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// Degrees.
    #[serde(default = "default_motorized")]
    pub motorized_sigma: f64,
    /// Degrees.
    #[serde(default = "default_manual")]
    pub manual_sigma: f64,
    #[serde(default = "default_devices")]
    pub devices: DeviceClasses,
    /// Expected coincidences per (preparation, setting) pair.
    #[serde(default)]
    pub counts_per_setting: f64,
    #[serde(default)]
    pub poisson: bool,
    #[serde(default = "default_distribution")]
    pub distribution: Distribution,
}

fn default_motorized() -> f64 {
    0.1
}

fn default_manual() -> f64 {
    0.5
}

fn default_devices() -> DeviceClasses {
    DeviceClasses::all(DeviceClass::Manual)
}

fn default_distribution() -> Distribution {
    Distribution::Gaussian
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            motorized_sigma: default_motorized(),
            manual_sigma: default_manual(),
            devices: default_devices(),
            counts_per_setting: 0.0,
            poisson: false,
            distribution: default_distribution(),
        }
    }
}

impl NoiseModel {
    /// Manual plates and phase plate, 30 000 coincidences/s for 60 s per setting.
    pub fn ququart_experiment() -> Self {
        Self { counts_per_setting: 30_000.0 * 60.0, poisson: true, ..Self::default() }
    }

    /// Motorized plates, 1500 coincidences/s for 30 min per setting.
    pub fn qubit_experiment() -> Self {
        Self {
            devices: DeviceClasses::all(DeviceClass::Motorized),
            counts_per_setting: 1500.0 * 1800.0,
            poisson: true,
            ..Self::default()
        }
    }

    pub fn noiseless() -> Self {
        Self { motorized_sigma: 0.0, manual_sigma: 0.0, poisson: false, ..Self::default() }
    }

    pub fn angles_only(self) -> Self {
        Self { poisson: false, ..self }
    }

    pub fn counts_only(self) -> Self {
        Self { motorized_sigma: 0.0, manual_sigma: 0.0, poisson: true, ..self }
    }

    pub fn sigma(&self, class: DeviceClass) -> f64 {
        match class {
            DeviceClass::Motorized => self.motorized_sigma,
            DeviceClass::Manual => self.manual_sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, s) in [("motorized_sigma", self.motorized_sigma), ("manual_sigma", self.manual_sigma)] {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Setup(format!("{name} must be finite and non-negative, got {s}")));
            }
        }
        if self.poisson && !(self.counts_per_setting > 0.0 && self.counts_per_setting.is_finite()) {
            return Err(Error::Setup(format!("poisson sampling needs positive counts_per_setting, got {}", self.counts_per_setting)));
        }
        Ok(())
    }
}
