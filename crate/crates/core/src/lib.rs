//! Pointwise machinery behind a pinching estimate for the linearized Ricci
//! flow in dimension `n >= 3`.
//!
//! * [`tensor`]: metrics, symmetric 2-tensors, algebraic curvature tensors,
//!   the Weyl decomposition, the Lichnerowicz reaction term and the pinching
//!   quantity `P`.
//! * [`certify`]: the rank-2 update matrix `B`, its closed-form spectrum, the
//!   quartic `f` and its two-value slices, plus brute-force oracles.
//! * [`flow`]: a fixed-step RK4 integrator for the reaction ODEs with
//!   telemetry and monitors for the pinching, blow-up and curvature bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod flow;
pub mod sampling;
pub mod tensor;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

pub use certify::{
    BetaVector, PowerSums, SpectralCertificate, SpectrumH, TimofteCertificate, TimofteSlice,
};
pub use flow::{CurvatureModel, FlowState, Telemetry, TelemetryRow};
pub use tensor::{AlgCurvature, PointFrame, SymTensor2, WeylReport};
