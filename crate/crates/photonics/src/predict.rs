//! Born-rule predictions of the two experimental layouts.

use ctxdim_core::linalg::{basis_ket, CVector};
use ctxdim_core::{Behavior, Scenario};

use crate::error::{Error, Result};
use crate::jones::{jones, WavePlate};
use crate::sagnac::{sagnac_prepare, PreparationParams};
use crate::station::{detector_kets, DetectorMap, StationSetting};

/// `p(ab|xy) = ¼·|⟨detector_{b,y}|ψ_{a,x}⟩|²` for mode-basis kets ordered `x·4 + a`.
pub fn predict_from_states(states: &[CVector], stations: &[StationSetting], detectors: &DetectorMap) -> Result<Behavior> {
    let scenario = Scenario::CGLMP4;
    if states.len() != 8 {
        return Err(Error::Shape { expected: 8, found: states.len() });
    }
    if stations.len() != 2 {
        return Err(Error::Shape { expected: 2, found: stations.len() });
    }
    let effects: Vec<Vec<CVector>> = stations.iter().map(|s| detectors.outcome_kets(&detector_kets(s))).collect();
    let mut table = vec![0.0; scenario.len()];
    for (a, b, x, y) in scenario.keys() {
        table[scenario.index(a, b, x, y)] = 0.25 * effects[y][b].dotc(&states[4 * x + a]).norm_sqr();
    }
    Ok(Behavior::raw(scenario, table)?)
}

pub fn predict_behavior(preps: &[PreparationParams], stations: &[StationSetting], detectors: &DetectorMap) -> Result<Behavior> {
    let states: Vec<CVector> = preps.iter().map(sagnac_prepare).collect();
    predict_from_states(&states, stations, detectors)
}

/// Two-outcome polarization layout: preparation `HWP(θ_{a|x})|H⟩`, analyzer `HWP(m_y)` then PBS.
pub fn predict_polarization(preparation_hwp: &[[f64; 2]; 2], measurement_hwp: &[f64; 2]) -> Result<Behavior> {
    let scenario = Scenario::CHSH;
    let h = basis_ket(2, 0);
    let mut table = vec![0.0; scenario.len()];
    for (a, b, x, y) in scenario.keys() {
        let state = jones(&WavePlate::half(preparation_hwp[x][a])) * &h;
        let effect = jones(&WavePlate::half(measurement_hwp[y])).adjoint() * basis_ket(2, b);
        table[scenario.index(a, b, x, y)] = 0.5 * effect.dotc(&state).norm_sqr();
    }
    Ok(Behavior::raw(scenario, table)?)
}
