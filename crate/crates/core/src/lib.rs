//! Nuclear excitation by intense coherent x-ray pulses: sublevel Bloch
//! dynamics, collective width enhancement in solid targets and Doppler
//! matching for ion beams.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod constants;
pub mod cooperative;
pub mod doppler;
pub mod error;
pub mod nucdata;
pub mod photonics;
pub mod pipeline;
pub mod specfun;
pub mod units;

pub use bloch::{DensityMatrixState, Envelope, SublevelSystem};
pub use cooperative::{CollectiveContext, Regime};
pub use doppler::{BoostSpec, PulseDurationFrame};
pub use error::{Error, Result};
pub use nucdata::{Dataset, LaserPulseSpec, NuclearTransition, TargetMaterial};
pub use photonics::{EffectiveField, FourierConvention, Seeding};
pub use pipeline::{ExcitationResult, ScenarioConfig, TargetMode};
pub use specfun::{AngularMomentum, Projection};
