//! Closed-form references: the paraxial gaussian beam, far-field two-slit
//! fringes and the classical harmonic oscillator.

use std::f64::consts::PI;

/// A gaussian beam with waist radius `w0` and vacuum wavelength `lambda0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaxialGaussian {
    pub w0: f64,
    pub lambda0: f64,
}

impl ParaxialGaussian {
    pub fn new(w0: f64, lambda0: f64) -> Self {
        ParaxialGaussian { w0, lambda0 }
    }

    pub fn rayleigh_length(&self) -> f64 {
        PI * self.w0 * self.w0 / self.lambda0
    }

    /// Beam radius `w(z) = w0·√(1 + (z/z_R)²)`.
    pub fn radius(&self, z: f64) -> f64 {
        waist_line(self, z)
    }

    /// Far-field half-angle `λ0/(π·w0)`.
    pub fn divergence(&self) -> f64 {
        self.lambda0 / (PI * self.w0)
    }
}

/// Positive branch of the waist line, `√(w0² + (λ0·z/(π·w0))²)`.
pub fn waist_line(g: &ParaxialGaussian, z: f64) -> f64 {
    g.w0.hypot(g.lambda0 * z / (PI * g.w0))
}

/// Amplitude relative to the waist centre, `√(w0/w)·exp(−x²/w²)`, for one
/// transverse dimension.
pub fn paraxial_amplitude(g: &ParaxialGaussian, x: f64, z: f64) -> f64 {
    let w = waist_line(g, z);
    (g.w0 / w).sqrt() * (-(x * x) / (w * w)).exp()
}

/// Transverse position `m·λ0·z/d` of the m-th far-field intensity maximum of
/// two slits `d` apart.
pub fn two_slit_fringe_positions(slit_separation: f64, lambda0: f64, screen_distance: f64, order: i32) -> f64 {
    order as f64 * lambda0 * screen_distance / slit_separation
}

/// Transverse position and momentum of a classical oscillator
/// `H = p²/2m + ½·m·Ω²·x²` at time `t`.
pub fn harmonic_trajectory(mass: f64, omega: f64, x0: f64, p0x: f64, t: f64) -> (f64, f64) {
    let (s, c) = (omega * t).sin_cos();
    (
        x0 * c + p0x / (mass * omega) * s,
        -mass * omega * x0 * s + p0x * c,
    )
}
