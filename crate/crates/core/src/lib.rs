//! Dense quantum linear algebra and contextuality functionals for
//! prepare-and-measure scenarios.

pub mod behavior;
pub mod canonical;
pub mod certify;
pub mod classical;
pub mod eigen;
pub mod error;
pub mod functional;
pub mod linalg;
pub mod quantum;
pub mod random;

pub use behavior::{behavior_from, Behavior, BehaviorTolerance, PartialBehavior, ProbabilitySource, Scenario};
pub use certify::{certify, BoundsRegistry, CertificationVerdict, CertifiedDimension};
pub use classical::{classical_max, ClassicalOptimum};
pub use error::{Error, Result};
pub use functional::{cglmp4, cglmp4_value, chsh, chsh_value, InequalityFunctional};
pub use linalg::{CMatrix, CVector, Subsystem};
pub use quantum::{born_probability, ghjw_dilation, is_psd, steer, Assemblage, DensityMatrix, HermitianOperator, Povm};
