//! Reaction ODEs of the linearized Ricci flow system at a single point.
//!
//! Spatial Laplacian and gradient terms are dropped, leaving
//! `∂g/∂t = −2Rc`, `∂h/∂t = 2Rm(h) − Rc∘h − h∘Rc`, and a curvature
//! evolution determined by the [`CurvatureModel`].

mod model;
mod run;
mod state;

pub use model::CurvatureModel;
pub use run::{
    run, InitialH, ModelKind, MonitorOutcome, NamedH, RunConfig, RunOutcome, RunSummary, Telemetry,
    TelemetryRow, CSV_HEADER,
};
pub use state::{
    lemma31_bound, pinch_reaction_derivative, reaction_rhs, riem_norm, scalar_rate, sphere_exact,
    step_rk4, Derivative, FlowState, ModelRate,
};
