//! Ray and particle trajectories for monochromatic Helmholtz-type waves.
//!
//! Each ray of a launched wavefront carries a momentum (or wave vector) and an
//! amplitude transported by flux conservation along ray tubes. The transverse
//! curvature of that amplitude defines a wave potential which pushes rays
//! perpendicular to their motion, so diffraction emerges from the coupled
//! Hamiltonian systems rather than from a field solver.
//!
//! Three engines share the machinery: optical (`D = (k² − n²k0²)/2k0 + W`),
//! non-relativistic quantum (`H = p²/2m + V + Q`) and relativistic
//! (`H = V + √(p² + m0² + 2EQ)`), all in units with `ħ = c = 1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod oracles;
pub mod scenario;
pub mod transport;
mod vec2;

pub use engine::{
    force, hamiltonian_value, prime, ray_velocity, run, step_bundle, Diagnostics, EngineKind,
    EngineSpec, GradientScheme, RunError, RunFailure, RunOutput, StepRecord,
};
pub use error::{ConfigError, EngineError, Fault};
pub use scenario::{
    build_launch, evaluate_medium, parse_config, Domain, LaunchProfile, LaunchShape, Medium,
    MediumForm, Quantity, ScenarioConfig, Slit,
};
pub use transport::{
    transport_amplitude, transverse_laplacian, tube_widths, wave_potential, Ray,
    WavePotentialField, Wavefront,
};
pub use vec2::Vec2;
