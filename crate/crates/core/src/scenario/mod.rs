//! Media, launch profiles and scenario documents.

mod config;
mod launch;
mod medium;

pub use config::{parse_config, ScenarioConfig};
pub use launch::{build_launch, LaunchProfile, LaunchShape, Slit};
pub use medium::{evaluate_medium, Domain, Medium, MediumForm, Quantity};
