//! TOML setup description: layout, preparations (explicit parameters or target kets),
//! stations, noise model and functional.

use serde::{Deserialize, Serialize};

use ctxdim_core::functional::by_name;
use ctxdim_core::linalg::{c, CVector};
use ctxdim_core::InequalityFunctional;

use crate::error::{Error, Result};
use crate::experiment::ReferenceStates;
use crate::layout::{Layout, PolarizationLayout, SagnacLayout};
use crate::noise::NoiseModel;
use crate::sagnac::{fit_preparation, logical_to_mode, FitOptions, FitResult, PreparationParams};
use crate::station::{ArmSetting, DetectorMap, StationSetting};

pub const SETUP_FORMAT: &str = "ctxdim-photonics-setup v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    pub format: String,
    pub functional: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sagnac: Option<SagnacSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<PolarizationLayout>,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub fit: FitOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SagnacSection {
    pub preparations: Preparations,
    pub stations: Vec<StationEntry>,
    #[serde(default)]
    pub detectors: DetectorMap,
}

/// Either a named reference family or one entry per `(a, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Preparations {
    Reference(ReferenceStates),
    Explicit(Vec<PreparationEntry>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreparationEntry {
    pub a: usize,
    pub x: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PreparationParams>,
    /// Logical-basis ket to fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<KetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetDoc {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl KetDoc {
    pub fn from_ket(ket: &CVector) -> Self {
        Self { re: ket.iter().map(|z| z.re).collect(), im: ket.iter().map(|z| z.im).collect() }
    }

    pub fn to_ket(&self) -> Result<CVector> {
        if self.re.len() != self.im.len() {
            return Err(Error::Shape { expected: self.re.len(), found: self.im.len() });
        }
        Ok(CVector::from_iterator(self.re.len(), self.re.iter().zip(&self.im).map(|(r, i)| c(*r, *i))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationEntry {
    pub y: usize,
    pub a: ArmSetting,
    pub b: ArmSetting,
    #[serde(default)]
    pub recombination_phase: f64,
}

/// A fit performed while resolving a setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub a: usize,
    pub x: usize,
    pub fit: FitResult,
}

#[derive(Debug, Clone)]
pub struct ResolvedSetup {
    pub layout: Layout,
    pub functional: InequalityFunctional,
    pub noise: NoiseModel,
    pub fits: Vec<FitRecord>,
    /// Fits whose residual marks an unreachable target.
    pub warnings: Vec<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl SetupFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: SetupFile = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        if file.format != SETUP_FORMAT {
            return Err(Error::Parse { line: 1, message: format!("unsupported format `{}`, expected `{SETUP_FORMAT}`", file.format) });
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("setup serializes")
    }

    pub fn resolve(&self) -> Result<ResolvedSetup> {
        let functional = by_name(&self.functional)?;
        self.noise.validate()?;
        let mut fits = Vec::new();
        let layout = match (&self.sagnac, &self.polarization) {
            (Some(s), None) => Layout::Sagnac(resolve_sagnac(s, &self.fit, &mut fits)?),
            (None, Some(p)) => Layout::Polarization(*p),
            _ => return Err(Error::Setup("exactly one of [sagnac] and [polarization] must be given".into())),
        };
        if functional.scenario() != layout.scenario() {
            return Err(Error::Setup(format!("functional `{}` does not fit the {} layout", functional.name(), layout.scenario())));
        }
        let warnings = fits
            .iter()
            .filter(|r| !r.fit.is_reachable())
            .map(|r| format!("preparation a={} x={} is outside the reachable family (residual {:e})", r.a, r.x, r.fit.residual))
            .collect();
        Ok(ResolvedSetup { layout, functional, noise: self.noise, fits, warnings })
    }
}

fn resolve_sagnac(s: &SagnacSection, options: &FitOptions, fits: &mut Vec<FitRecord>) -> Result<SagnacLayout> {
    let mut preps: Vec<Option<PreparationParams>> = vec![None; 8];
    match &s.preparations {
        Preparations::Reference(states) => {
            for (i, t) in states.targets().iter().enumerate() {
                let fit = fit_preparation(t, options)?;
                fits.push(FitRecord { a: i % 4, x: i / 4, fit });
                preps[i] = Some(fit.params);
            }
        }
        Preparations::Explicit(entries) => {
            for e in entries {
                if e.a >= 4 || e.x >= 2 {
                    return Err(Error::Setup(format!("preparation label a={} x={} out of range", e.a, e.x)));
                }
                let slot = &mut preps[4 * e.x + e.a];
                if slot.is_some() {
                    return Err(Error::Setup(format!("preparation a={} x={} given twice", e.a, e.x)));
                }
                *slot = Some(match (&e.params, &e.target) {
                    (Some(p), None) => *p,
                    (None, Some(t)) => {
                        let ket = t.to_ket()?;
                        if ket.len() != 4 {
                            return Err(Error::Shape { expected: 4, found: ket.len() });
                        }
                        let fit = fit_preparation(&logical_to_mode(&ket.normalize()), options)?;
                        fits.push(FitRecord { a: e.a, x: e.x, fit });
                        fit.params
                    }
                    _ => return Err(Error::Setup(format!("preparation a={} x={} needs exactly one of params and target", e.a, e.x))),
                });
            }
        }
    }
    let preparations = preps
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::Setup(format!("preparation a={} x={} missing", i % 4, i / 4))))
        .collect::<Result<Vec<_>>>()?;
    let mut stations: Vec<Option<StationSetting>> = vec![None; 2];
    for e in &s.stations {
        let slot = stations.get_mut(e.y).ok_or_else(|| Error::Setup(format!("station y={} out of range", e.y)))?;
        if slot.is_some() {
            return Err(Error::Setup(format!("station y={} given twice", e.y)));
        }
        *slot = Some(StationSetting::new(e.a, e.b).with_recombination_phase(e.recombination_phase));
    }
    let stations = stations
        .into_iter()
        .enumerate()
        .map(|(y, s)| s.ok_or_else(|| Error::Setup(format!("station y={y} missing"))))
        .collect::<Result<Vec<_>>>()?;
    let layout = SagnacLayout { preparations, stations, detectors: s.detectors };
    layout.validate()?;
    Ok(layout)
}
