use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::scenario::Quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Optical,
    Quantum,
    Relativistic,
}

/// How the tangential gradient of the wave potential is formed from the
/// amplitudes on a front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientScheme {
    /// Exact gradient of the discrete transverse energy `c·Σ (ΔR)²/h`,
    /// divided by each ray's tube mass.
    #[default]
    Variational,
    /// Three-point differences of the pointwise potential along the front.
    Stencil,
}

/// Which Hamiltonian to integrate, with its constants in `ħ = c = 1` units.
///
/// `mass` is `m` for the quantum engine and the rest mass `m0` for the
/// relativistic one; the optical engine ignores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSpec {
    pub kind: EngineKind,
    pub eikonal: bool,
    pub scheme: GradientScheme,
    k0: f64,
    energy: f64,
    mass: f64,
    energy_given: bool,
}

impl EngineSpec {
    fn base(kind: EngineKind, k0: f64, energy: f64, mass: f64, energy_given: bool) -> Self {
        EngineSpec {
            kind,
            eikonal: false,
            scheme: GradientScheme::Variational,
            k0,
            energy,
            mass,
            energy_given,
        }
    }

    /// Optical engine with vacuum wavenumber `k0`; ω = k0.
    pub fn optical(k0: f64) -> Self {
        Self::base(EngineKind::Optical, k0, k0, 0.0, false)
    }

    /// Quantum engine launched with momentum `p0 = k0`, so `E = k0²/2m`.
    pub fn quantum(mass: f64, k0: f64) -> Self {
        Self::base(EngineKind::Quantum, k0, k0 * k0 / (2.0 * mass), mass, false)
    }

    pub fn quantum_with_energy(mass: f64, energy: f64) -> Self {
        Self::base(EngineKind::Quantum, (2.0 * mass * energy).sqrt(), energy, mass, true)
    }

    /// Relativistic engine with rest mass `m0` and launch momentum `k0`.
    pub fn relativistic(m0: f64, k0: f64) -> Self {
        Self::base(EngineKind::Relativistic, k0, k0.hypot(m0), m0, false)
    }

    pub fn relativistic_with_energy(m0: f64, energy: f64) -> Self {
        let k0 = ((energy - m0) * (energy + m0)).sqrt();
        Self::base(EngineKind::Relativistic, k0, energy, m0, true)
    }

    pub fn with_eikonal(mut self, eikonal: bool) -> Self {
        self.eikonal = eikonal;
        self
    }

    pub fn with_scheme(mut self, scheme: GradientScheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Vacuum wavenumber, equal to the launch momentum.
    pub fn wavenumber(&self) -> f64 {
        self.k0
    }

    pub fn momentum(&self) -> f64 {
        self.k0
    }

    /// E for the particle engines, ω = c·k0 for the optical one.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Whether the energy, rather than the wavenumber, defined the engine.
    pub fn energy_given(&self) -> bool {
        self.energy_given
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k0
    }

    /// Value the Hamiltonian keeps along rays in vacuum.
    pub fn conserved_value(&self) -> f64 {
        match self.kind {
            EngineKind::Optical => 0.0,
            _ => self.energy,
        }
    }

    /// Normalisation for Hamiltonian drift: `E`, or `c·k0` for the optical engine.
    pub fn energy_scale(&self) -> f64 {
        match self.kind {
            EngineKind::Optical => self.k0,
            _ => self.energy,
        }
    }

    /// `c` in `potential = −c·∇²R/R`.
    pub fn wave_coefficient(&self) -> f64 {
        match self.kind {
            EngineKind::Optical => 0.5 / self.k0,
            EngineKind::Quantum => 0.5 / self.mass,
            EngineKind::Relativistic => 0.5 / self.energy,
        }
    }

    pub fn medium_quantity(&self) -> Quantity {
        match self.kind {
            EngineKind::Optical => Quantity::Index,
            _ => Quantity::Potential,
        }
    }

    /// Speed of a launch ray in vacuum.
    pub fn launch_speed(&self) -> f64 {
        match self.kind {
            EngineKind::Optical => 1.0,
            EngineKind::Quantum => self.k0 / self.mass,
            EngineKind::Relativistic => self.k0 / self.energy,
        }
    }
}
