use thiserror::Error;

/// A scenario document that cannot become a [`crate::ScenarioConfig`].
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed scenario: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// What went wrong with a ray.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Fault {
    #[error("caustic: neighbouring rays crossed or touched (spacing {spacing:e})")]
    Caustic { spacing: f64 },
    #[error("left the domain box at (x = {x}, z = {z})")]
    DomainEscape { x: f64, z: f64 },
    #[error("amplitude {amplitude:e} fell below the positivity floor")]
    Underflow { amplitude: f64 },
    #[error("imaginary momentum (classically forbidden region)")]
    ImaginaryMomentum,
    #[error("singular velocity: E − V = {gap:e}")]
    SingularVelocity { gap: f64 },
    #[error("implicit midpoint did not converge in {iterations} iterations")]
    MidpointDivergence { iterations: usize },
    #[error("stalled: momentum magnitude is zero")]
    Stalled,
    #[error("state became non-finite")]
    NonFinite,
}

/// A [`Fault`] tagged with the ray and step where it occurred.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("ray {ray}, step {step}: {fault}")]
pub struct EngineError {
    pub ray: usize,
    pub step: usize,
    pub fault: Fault,
}

impl EngineError {
    pub fn new(ray: usize, fault: Fault) -> Self {
        EngineError { ray, step: 0, fault }
    }

    pub fn at_step(mut self, step: usize) -> Self {
        self.step = step;
        self
    }

    pub fn is_caustic(&self) -> bool {
        matches!(self.fault, Fault::Caustic { .. })
    }
}
