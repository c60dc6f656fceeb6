//! Amplitude transport along ray tubes and the wave-potential closure.
//!
//! Positions along a front are measured by a transverse coordinate ξ that
//! increases with ray index. The spacing of neighbours `j, j+1` is their
//! separation projected on the tangent of the mean ray direction, and the
//! tube width of a ray is the mean of its two spacings (the single spacing at
//! the ends).

use crate::engine::{EngineSpec, GradientScheme};
use crate::error::{EngineError, Fault};
use crate::vec2::Vec2;

/// Amplitudes below this fraction of the launch peak are treated as nodes.
pub const AMPLITUDE_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub id: usize,
    pub position: Vec2,
    /// Momentum, or wave vector for the optical engine.
    pub momentum: Vec2,
    /// Amplitude relative to the launch peak.
    pub amplitude: f64,
    /// Accumulated ∫p·dr.
    pub phase: f64,
    /// Tube width at the last closure.
    pub tube_width: f64,
    /// |p| at the last closure.
    pub tube_momentum: f64,
    /// Wave potential (Q or W) at the last closure.
    pub potential: f64,
    /// Derivative of the wave potential along ξ at the last closure.
    pub wave_gradient: f64,
}

impl Ray {
    pub fn new(id: usize, position: Vec2, momentum: Vec2, amplitude: f64) -> Self {
        Ray {
            id,
            position,
            momentum,
            amplitude,
            phase: 0.0,
            tube_width: f64::NAN,
            tube_momentum: momentum.norm(),
            potential: 0.0,
            wave_gradient: 0.0,
        }
    }

    /// `R²·|p|·d` with the cached closure values.
    pub fn flux(&self) -> f64 {
        self.amplitude * self.amplitude * self.tube_momentum * self.tube_width
    }
}

/// Rays sharing one launch line and one energy, ordered by launch index.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefront {
    pub rays: Vec<Ray>,
    pub step: usize,
    pub time: f64,
    pub caustic: bool,
    /// Largest launch amplitude, the reference for the positivity floor.
    pub peak_amplitude: f64,
}

impl Wavefront {
    pub fn new(rays: Vec<Ray>) -> Self {
        let peak_amplitude = rays.iter().map(|r| r.amplitude).fold(0.0, f64::max);
        Wavefront {
            rays,
            step: 0,
            time: 0.0,
            caustic: false,
            peak_amplitude,
        }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Whether the front has enough rays for a transverse second derivative.
    pub fn is_coupled(&self) -> bool {
        self.rays.len() >= 3
    }
}

/// Per-ray wave potential and its gradient, which lies along the front.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePotentialField {
    pub values: Vec<f64>,
    /// Derivative along ξ.
    pub tangential: Vec<f64>,
    pub tangents: Vec<Vec2>,
}

impl WavePotentialField {
    fn zero(front: &Wavefront) -> Self {
        let n = front.len();
        WavePotentialField {
            values: vec![0.0; n],
            tangential: vec![0.0; n],
            tangents: front.rays.iter().map(|r| r.momentum.tangent()).collect(),
        }
    }

    pub fn gradient(&self, i: usize) -> Vec2 {
        self.tangents[i] * self.tangential[i]
    }
}

fn caustic(ray: usize, spacing: f64) -> EngineError {
    EngineError::new(ray, Fault::Caustic { spacing })
}

/// Spacings of neighbouring rays along ξ; a non-positive spacing is a caustic.
pub fn link_spacings(front: &Wavefront) -> Result<Vec<f64>, EngineError> {
    let rays = &front.rays;
    let mut spacings = Vec::with_capacity(rays.len().saturating_sub(1));
    for (j, pair) in rays.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let unit_a = a.momentum * (1.0 / a.momentum.norm());
        let unit_b = b.momentum * (1.0 / b.momentum.norm());
        let h = (b.position - a.position).across(unit_a + unit_b);
        if !(h > 0.0) {
            return Err(caustic(if h.is_nan() { j } else { j + 1 }, h));
        }
        spacings.push(h);
    }
    Ok(spacings)
}

fn widths_from_spacings(spacings: &[f64]) -> Vec<f64> {
    let m = spacings.len();
    (0..=m)
        .map(|i| match i {
            0 => spacings[0],
            i if i == m => spacings[m - 1],
            i => 0.5 * (spacings[i - 1] + spacings[i]),
        })
        .collect()
}

/// Tube width of every ray: half the distance between its two neighbours
/// across the front, or the full distance to the single neighbour at an end.
///
/// Fronts with fewer than two rays have no tubes and keep their cached widths.
pub fn tube_widths(front: &Wavefront) -> Result<Vec<f64>, EngineError> {
    if front.len() < 2 {
        return Ok(front.rays.iter().map(|r| r.tube_width).collect());
    }
    Ok(widths_from_spacings(&link_spacings(front)?))
}

/// Amplitudes on `next` that keep `R²·|p|·d` of every tube equal to its
/// value on `prev`, read from `prev`'s cached widths and momenta.
pub fn transport_amplitude(prev: &Wavefront, next: &Wavefront) -> Result<Vec<f64>, EngineError> {
    Ok(transport(prev, next)?.0)
}

pub(crate) fn transport(
    prev: &Wavefront,
    next: &Wavefront,
) -> Result<(Vec<f64>, Vec<f64>), EngineError> {
    let widths = tube_widths(next)?;
    let amplitudes = prev
        .rays
        .iter()
        .zip(&next.rays)
        .zip(&widths)
        .map(|((before, after), &d)| {
            before.amplitude
                * ((before.tube_momentum * before.tube_width) / (after.momentum.norm() * d)).sqrt()
        })
        .collect();
    Ok((amplitudes, widths))
}

/// Three-point second derivative on a non-uniform grid with left spacing
/// `h1` and right spacing `h2`.
fn second_derivative(left: f64, centre: f64, right: f64, h1: f64, h2: f64) -> f64 {
    let span = h1 + h2;
    2.0 * (left / (h1 * span) + right / (h2 * span)) - 2.0 * centre / (h1 * h2)
}

/// Three-point first derivative on a non-uniform grid.
fn first_derivative(left: f64, centre: f64, right: f64, h1: f64, h2: f64) -> f64 {
    let span = h1 + h2;
    (h1 / (h2 * span) * right - h2 / (h1 * span) * left) + (h2 - h1) / (h1 * h2) * centre
}

fn interior_stencil(
    values: &[f64],
    spacings: &[f64],
    stencil: fn(f64, f64, f64, f64, f64) -> f64,
) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = stencil(
            values[i - 1],
            values[i],
            values[i + 1],
            spacings[i - 1],
            spacings[i],
        );
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    out
}

/// ∇²R at every ray, as the second derivative of R along ξ. End rays copy
/// their interior neighbour.
pub fn transverse_laplacian(front: &Wavefront) -> Result<Vec<f64>, EngineError> {
    if !front.is_coupled() {
        return Ok(vec![0.0; front.len()]);
    }
    let spacings = link_spacings(front)?;
    let amplitudes: Vec<f64> = front.rays.iter().map(|r| r.amplitude).collect();
    Ok(interior_stencil(&amplitudes, &spacings, second_derivative))
}

/// Wave potential `−c·∇²R/R` of every ray and its derivative along ξ.
///
/// Eikonal engines and fronts of fewer than three rays get a zero field.
pub fn wave_potential(
    front: &Wavefront,
    engine: &EngineSpec,
) -> Result<WavePotentialField, EngineError> {
    let mut field = WavePotentialField::zero(front);
    if engine.eikonal || !front.is_coupled() {
        return Ok(field);
    }
    let floor = AMPLITUDE_FLOOR * front.peak_amplitude;
    if let Some(ray) = front.rays.iter().find(|r| !(r.amplitude >= floor)) {
        return Err(EngineError::new(
            ray.id,
            Fault::Underflow {
                amplitude: ray.amplitude,
            },
        ));
    }
    let c = engine.wave_coefficient();
    let spacings = link_spacings(front)?;
    let amplitudes: Vec<f64> = front.rays.iter().map(|r| r.amplitude).collect();
    let laplacian = interior_stencil(&amplitudes, &spacings, second_derivative);
    field.values = laplacian
        .iter()
        .zip(&amplitudes)
        .map(|(lap, r)| -c * lap / r)
        .collect();
    field.tangential = match engine.scheme {
        GradientScheme::Stencil => interior_stencil(&field.values, &spacings, first_derivative),
        GradientScheme::Variational => variational_gradient(&amplitudes, &spacings, c),
    };
    Ok(field)
}

/// Gradient of `U = c·Σ_j (R_{j+1} − R_j)²/h_j` with respect to each ray's ξ,
/// per unit tube mass `μ_i = R_i²·d_i`, holding the masses fixed so that
/// `R_i = √(μ_i/d_i)` follows the widths. End rays copy their neighbour.
fn variational_gradient(amplitudes: &[f64], spacings: &[f64], c: f64) -> Vec<f64> {
    let n = amplitudes.len();
    let m = spacings.len();
    let widths = widths_from_spacings(spacings);
    let slope: Vec<f64> = (0..m)
        .map(|j| (amplitudes[j + 1] - amplitudes[j]) / spacings[j])
        .collect();
    // ∂U/∂R_i, then ∂U/∂d_i through R_i(d_i).
    let by_width: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { 2.0 * c * slope[i - 1] } else { 0.0 };
            let right = if i < m { 2.0 * c * slope[i] } else { 0.0 };
            (left - right) * (-amplitudes[i] / (2.0 * widths[i]))
        })
        .collect();
    // ∂U/∂h_j: explicit dependence plus the widths that contain h_j.
    let by_spacing: Vec<f64> = (0..m)
        .map(|j| {
            let into_left = if j == 0 { 1.0 } else { 0.5 };
            let into_right = if j == m - 1 { 1.0 } else { 0.5 };
            -c * slope[j] * slope[j] + (into_left * by_width[j] + into_right * by_width[j + 1])
        })
        .collect();
    let mut gradient: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { by_spacing[i - 1] } else { 0.0 };
            let right = if i < m { by_spacing[i] } else { 0.0 };
            let mass = amplitudes[i] * amplitudes[i] * widths[i];
            (left - right) / mass
        })
        .collect();
    gradient[0] = gradient[1];
    gradient[n - 1] = gradient[n - 2];
    gradient
}
