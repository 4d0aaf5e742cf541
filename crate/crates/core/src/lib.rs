//! Physical-layer security of reflecting-surface-aided links with residual
//! phase errors.
//!
//! The crate maps a physical scenario ([`SystemConfig`]) to the equivalent
//! scalar SNR laws of the legitimate and eavesdropper links, evaluates secrecy
//! outage probability and average secrecy capacity in closed or quadrature
//! form, and checks those against a per-element Monte Carlo simulation of the
//! composite channel.
//!
//! The analytical modules are generic over the scalar type ([`Real`]); the
//! `*F64` / `*F32` aliases below name the common instantiations.

// `!(x > 0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod laplace;
pub mod metrics;
pub mod montecarlo;
pub mod quad;
pub mod real;
pub mod special;
pub mod sweep;
pub mod transform;
pub mod validate;

pub use channel::{
    Beckmann, EveDist, FoldedNormal, HopFading, LegitimateDist, LegitimateModel, MomentSet, Nakagami,
    PhaseErrorModel, SystemConfig,
};
pub use error::{Error, Result};
pub use laplace::EulerInversion;
pub use metrics::{AscBreakdown, Scenario, SecrecyPoint};
pub use montecarlo::{TestReport, TrialBatch};
pub use real::Real;
pub use special::Probability;
pub use transform::{BeckmannComponents, GammaLaw, SnrLaw};

pub type SystemConfigF64 = SystemConfig<f64>;
pub type MomentSetF64 = MomentSet<f64>;
pub type LegitimateDistF64 = LegitimateDist<f64>;
pub type EveDistF64 = EveDist<f64>;
pub type BeckmannComponentsF64 = BeckmannComponents<f64>;
pub type ProbabilityF64 = Probability<f64>;

pub type SystemConfigF32 = SystemConfig<f32>;
pub type MomentSetF32 = MomentSet<f32>;
pub type LegitimateDistF32 = LegitimateDist<f32>;
pub type EveDistF32 = EveDist<f32>;
pub type BeckmannComponentsF32 = BeckmannComponents<f32>;
pub type ProbabilityF32 = Probability<f32>;

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
