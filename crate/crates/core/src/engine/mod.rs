//! Hamiltonians, time stepping and the run loop.

mod dynamics;
mod run;
mod spec;
mod step;

pub use dynamics::{force, hamiltonian_value, ray_velocity};
pub use run::{
    run, Diagnostics, PlaneProfile, PlaneSample, RaySample, RunError, RunFailure, RunOutput,
    StepRecord,
};
pub use spec::{EngineKind, EngineSpec, GradientScheme};
pub use step::{prime, step_bundle, MIDPOINT_MAX_ITERATIONS, MIDPOINT_TOLERANCE};
