use crate::engine::EngineSpec;
use crate::error::ConfigError;
use crate::transport::{tube_widths, Ray, Wavefront, AMPLITUDE_FLOOR};
use crate::vec2::Vec2;

/// One aperture of a slit launch: a gaussian peak of width `peak_width`
/// centred on `center`, in an opening `width` wide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slit {
    pub center: f64,
    pub width: f64,
    pub peak_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LaunchShape {
    Gaussian { w0: f64, truncation_factor: f64 },
    Slits(Vec<Slit>),
}

/// Amplitude profile on the launch line z = 0 and how densely it is sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct LaunchProfile {
    pub shape: LaunchShape,
    pub ray_count: usize,
}

impl LaunchProfile {
    pub const DEFAULT_TRUNCATION: f64 = 4.0;

    pub fn gaussian(w0: f64, ray_count: usize) -> Self {
        LaunchProfile {
            shape: LaunchShape::Gaussian {
                w0,
                truncation_factor: Self::DEFAULT_TRUNCATION,
            },
            ray_count,
        }
    }

    /// Half-width X of the sampled span [−X, X].
    ///
    /// For slits the span reaches the outer edge of the outermost aperture.
    pub fn half_width(&self) -> f64 {
        match &self.shape {
            LaunchShape::Gaussian {
                w0,
                truncation_factor,
            } => truncation_factor * w0,
            LaunchShape::Slits(slits) => slits
                .iter()
                .map(|s| s.center.abs() + 0.5 * s.width)
                .fold(0.0, f64::max),
        }
    }

    /// Launch amplitude at transverse offset `x`.
    pub fn amplitude(&self, x: f64) -> f64 {
        match &self.shape {
            LaunchShape::Gaussian { w0, .. } => (-(x * x) / (w0 * w0)).exp(),
            LaunchShape::Slits(slits) => slits
                .iter()
                .map(|s| {
                    let u = (x - s.center) / s.peak_width;
                    (-u * u).exp()
                })
                .sum(),
        }
    }

    /// Uniformly spaced launch offsets, mirror-exact about x = 0.
    pub fn offsets(&self) -> Vec<f64> {
        let n = self.ray_count;
        let half = self.half_width();
        if n == 1 {
            return vec![0.0];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| half * (2.0 * i as f64 - last) / last)
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ray_count < 3 {
            return Err(ConfigError::invalid(
                "launch.ray_count",
                format!(
                    "need at least 3 rays for a transverse second derivative, got {}",
                    self.ray_count
                ),
            ));
        }
        match &self.shape {
            LaunchShape::Gaussian {
                w0,
                truncation_factor,
            } => {
                positive("launch.w0", *w0)?;
                positive("launch.truncation_factor", *truncation_factor)?;
            }
            LaunchShape::Slits(slits) => {
                if slits.is_empty() {
                    return Err(ConfigError::invalid("launch.slits", "at least one slit"));
                }
                for (i, s) in slits.iter().enumerate() {
                    if !s.center.is_finite() {
                        return Err(ConfigError::invalid(
                            format!("launch.slits[{i}].center"),
                            "must be finite",
                        ));
                    }
                    positive(&format!("launch.slits[{i}].width"), s.width)?;
                    positive(&format!("launch.slits[{i}].peak_width"), s.peak_width)?;
                }
            }
        }
        let amplitudes: Vec<f64> = self.offsets().iter().map(|&x| self.amplitude(x)).collect();
        let peak = amplitudes.iter().cloned().fold(0.0, f64::max);
        if let Some(i) = amplitudes.iter().position(|&r| !(r > AMPLITUDE_FLOOR * peak)) {
            return Err(ConfigError::invalid(
                "launch",
                format!(
                    "amplitude {:e} of ray {i} is below the positivity floor; narrow the span",
                    amplitudes[i]
                ),
            ));
        }
        Ok(())
    }
}

fn positive(path: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(path, format!("must be positive, got {value}")))
    }
}

/// Rays on z = 0 spanning [−X, X], all moving along +z with the engine's
/// vacuum momentum and carrying the profile amplitude.
pub fn build_launch(profile: &LaunchProfile, engine: &EngineSpec) -> Result<Wavefront, ConfigError> {
    profile.validate()?;
    let p0 = engine.momentum();
    let rays = profile
        .offsets()
        .into_iter()
        .enumerate()
        .map(|(id, x)| Ray::new(id, Vec2::new(x, 0.0), Vec2::new(0.0, p0), profile.amplitude(x)))
        .collect();
    let mut front = Wavefront::new(rays);
    let widths = tube_widths(&front).map_err(|e| {
        ConfigError::invalid("launch", format!("degenerate launch spacing: {e}"))
    })?;
    for (ray, d) in front.rays.iter_mut().zip(widths) {
        ray.tube_width = d;
    }
    Ok(front)
}
