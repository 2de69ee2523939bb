//! The two published layouts: ququart preparations fitted to the reference states,
//! the tabulated station settings, and the qubit polarization layout.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use ctxdim_core::canonical::{optimal_preparation_ket, separable_preparation_ket, CHSH_MEASUREMENT_HWP, CHSH_PREPARATION_HWP};
use ctxdim_core::linalg::CVector;

use crate::error::Result;
use crate::layout::{PolarizationLayout, SagnacLayout};
use crate::sagnac::{fit_preparation, logical_to_mode, FitOptions, FitResult};
use crate::station::{ArmSetting, StationSetting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceStates {
    Optimal,
    Separable,
}

impl ReferenceStates {
    /// Mode-basis kets ordered `x·4 + a`.
    pub fn targets(self) -> Vec<CVector> {
        let ket = match self {
            ReferenceStates::Optimal => optimal_preparation_ket,
            ReferenceStates::Separable => separable_preparation_ket,
        };
        (0..2).flat_map(|x| (0..4).map(move |a| logical_to_mode(&ket(a, x)))).collect()
    }
}

/// Station plates as tabulated: `(QWP_a, HWP_a, QWP_b, HWP_b)` per setting.
pub const STATION_ANGLES: [[f64; 4]; 2] = [[45.0, 22.5, 0.0, 22.5], [45.0, 11.25, -45.0, 11.25]];

/// Path-b phase the second station needs to realize the reference measurement.
pub const SECOND_STATION_PHASE: f64 = -FRAC_PI_2;

pub fn tabulated_stations() -> Vec<StationSetting> {
    STATION_ANGLES
        .iter()
        .map(|s| StationSetting::new(ArmSetting::new(s[0], s[1]), ArmSetting::new(s[2], s[3])))
        .collect()
}

/// Tabulated stations with the recombination phase of the second one set.
pub fn phased_stations() -> Vec<StationSetting> {
    let mut st = tabulated_stations();
    st[1] = st[1].with_recombination_phase(SECOND_STATION_PHASE);
    st
}

pub fn fit_all(targets: &[CVector], options: &FitOptions) -> Result<Vec<FitResult>> {
    targets.iter().map(|t| fit_preparation(t, options)).collect()
}

/// Fitted preparations for `states` measured by `stations`.
pub fn fitted_layout(states: ReferenceStates, stations: Vec<StationSetting>, options: &FitOptions) -> Result<(SagnacLayout, Vec<FitResult>)> {
    let fits = fit_all(&states.targets(), options)?;
    let layout = SagnacLayout::new(fits.iter().map(|f| f.params).collect(), stations)?;
    Ok((layout, fits))
}

pub fn qubit_layout() -> PolarizationLayout {
    PolarizationLayout { preparation_hwp: CHSH_PREPARATION_HWP, measurement_hwp: CHSH_MEASUREMENT_HWP }
}
