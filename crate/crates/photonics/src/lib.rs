//! Jones-calculus simulation of the prepare-and-measure optics: wave plates, two-path
//! four-level preparations, recombining measurement stations and Monte-Carlo error budgets.

pub mod error;
pub mod experiment;
pub mod jones;
pub mod layout;
pub mod montecarlo;
pub mod noise;
pub mod predict;
pub mod sagnac;
pub mod setup;
pub mod station;
pub mod tables;

pub use error::{Error, Result};
pub use jones::{jones, PlateKind, WavePlate};
pub use layout::{Layout, PolarizationLayout, SagnacLayout};
pub use montecarlo::{monte_carlo, MonteCarloSummary};
pub use noise::{DeviceClass, DeviceClasses, Distribution, NoiseModel, PlateRole};
pub use predict::{predict_behavior, predict_from_states, predict_polarization};
pub use sagnac::{fit_preparation, sagnac_prepare, FitOptions, FitResult, PreparationParams};
pub use station::{station_povm, ArmSetting, DetectorMap, StationSetting};
