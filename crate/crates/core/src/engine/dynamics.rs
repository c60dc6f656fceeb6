use crate::engine::{EngineKind, EngineSpec};
use crate::error::Fault;
use crate::scenario::Medium;
use crate::transport::Ray;
use crate::vec2::Vec2;

/// D (optical, conserved at 0) or H (particle engines, conserved at E) for a
/// ray whose wave potential is `potential`. Eikonal engines drop the term.
pub fn hamiltonian_value(
    engine: &EngineSpec,
    ray: &Ray,
    medium: &Medium,
    potential: f64,
) -> Result<f64, Fault> {
    let (value, _) = medium.evaluate(ray.position)?;
    let q = if engine.eikonal { 0.0 } else { potential };
    let p2 = ray.momentum.dot(ray.momentum);
    Ok(match engine.kind {
        EngineKind::Optical => {
            let k0 = engine.wavenumber();
            (p2 - value * value * k0 * k0) / (2.0 * k0) + q
        }
        EngineKind::Quantum => p2 / (2.0 * engine.mass()) + value + q,
        EngineKind::Relativistic => {
            let m0 = engine.mass();
            let radicand = p2 + m0 * m0 + 2.0 * engine.energy() * q;
            if !(radicand > 0.0) {
                return Err(Fault::ImaginaryMomentum);
            }
            value + radicand.sqrt()
        }
    })
}

/// dr/dt for the ray's engine.
pub fn ray_velocity(engine: &EngineSpec, ray: &Ray, medium: &Medium) -> Result<Vec2, Fault> {
    let (value, _) = medium.evaluate(ray.position)?;
    velocity(engine, ray.momentum, value)
}

pub(crate) fn velocity(engine: &EngineSpec, momentum: Vec2, value: f64) -> Result<Vec2, Fault> {
    Ok(match engine.kind {
        EngineKind::Optical => momentum * (1.0 / engine.wavenumber()),
        EngineKind::Quantum => momentum * (1.0 / engine.mass()),
        EngineKind::Relativistic => {
            let gap = engine.energy() - value;
            if !(gap > 0.0) {
                return Err(Fault::SingularVelocity { gap });
            }
            momentum * (1.0 / gap)
        }
    })
}

/// Force from the medium alone: `k0·n·∇n` (optical) or `−∇V`.
pub(crate) fn medium_force(engine: &EngineSpec, value: f64, gradient: Vec2) -> Vec2 {
    match engine.kind {
        EngineKind::Optical => gradient * (engine.wavenumber() * value),
        _ => -gradient,
    }
}

/// Factor multiplying the wave-potential gradient in the force:
/// `1/(1 − V/E)` for the relativistic engine, otherwise 1.
pub(crate) fn wave_force_scale(engine: &EngineSpec, value: f64) -> f64 {
    match engine.kind {
        EngineKind::Relativistic => 1.0 / (1.0 - value / engine.energy()),
        _ => 1.0,
    }
}

/// dp/dt (or dk/dt) given the wave-potential gradient at the ray.
pub fn force(
    engine: &EngineSpec,
    ray: &Ray,
    medium: &Medium,
    wave_gradient: Vec2,
) -> Result<Vec2, Fault> {
    let (value, gradient) = medium.evaluate(ray.position)?;
    let external = medium_force(engine, value, gradient);
    if engine.eikonal {
        return Ok(external);
    }
    Ok(external - wave_gradient * wave_force_scale(engine, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{MediumForm, Quantity};

    fn ray(momentum: Vec2) -> Ray {
        Ray::new(0, Vec2::new(0.3, 1.0), momentum, 1.0)
    }

    #[test]
    fn launch_conditions_sit_on_the_energy_shell() {
        let k0 = 40.0;
        let vac_i = Medium::vacuum(Quantity::Index);
        let vac_v = Medium::vacuum(Quantity::Potential);
        let opt = EngineSpec::optical(k0);
        assert_eq!(hamiltonian_value(&opt, &ray(Vec2::new(0.0, k0)), &vac_i, 0.0).unwrap(), 0.0);
        let q = EngineSpec::quantum(1.5, k0);
        let h = hamiltonian_value(&q, &ray(Vec2::new(0.0, k0)), &vac_v, 0.0).unwrap();
        assert_eq!(h, q.energy());
        let r = EngineSpec::relativistic(0.0, k0);
        let h = hamiltonian_value(&r, &ray(Vec2::new(0.0, k0)), &vac_v, 0.0).unwrap();
        assert_eq!(h, r.energy());
    }

    #[test]
    fn velocities() {
        let vac_i = Medium::vacuum(Quantity::Index);
        let vac_v = Medium::vacuum(Quantity::Potential);
        let opt = EngineSpec::optical(40.0);
        assert_eq!(
            ray_velocity(&opt, &ray(Vec2::new(0.0, 40.0)), &vac_i).unwrap(),
            Vec2::new(0.0, 1.0)
        );
        let q = EngineSpec::quantum(2.0, 40.0);
        assert_eq!(
            ray_velocity(&q, &ray(Vec2::new(0.0, 40.0)), &vac_v).unwrap(),
            Vec2::new(0.0, 20.0)
        );
        let r = EngineSpec::relativistic(0.0, 40.0);
        let v = ray_velocity(&r, &ray(Vec2::new(0.0, 40.0)), &vac_v).unwrap();
        assert_eq!(v.norm(), 1.0);
    }

    #[test]
    fn relativistic_velocity_parallel_to_momentum() {
        let vac_v = Medium::vacuum(Quantity::Potential);
        let r = EngineSpec::relativistic(1.0, 3.0);
        let p = Vec2::new(0.4, 2.9);
        let v = ray_velocity(&r, &ray(p), &vac_v).unwrap();
        assert!(v.across(p).abs() < 1e-16);
    }

    #[test]
    fn eikonal_uniform_medium_exerts_no_force() {
        let uniform = Medium {
            quantity: Quantity::Potential,
            form: MediumForm::Uniform { value: 0.2 },
            domain: None,
        };
        for engine in [EngineSpec::quantum(1.0, 5.0), EngineSpec::relativistic(1.0, 5.0)] {
            let f = force(
                &engine.with_eikonal(true),
                &ray(Vec2::new(0.0, 5.0)),
                &uniform,
                Vec2::new(3.0, 0.0),
            )
            .unwrap();
            assert_eq!(f, Vec2::ZERO);
        }
    }

    #[test]
    fn wave_force_is_minus_the_gradient_in_vacuum() {
        let vac_v = Medium::vacuum(Quantity::Potential);
        let p = Vec2::new(0.0, 5.0);
        let g = p.tangent() * 0.25;
        for engine in [EngineSpec::quantum(1.0, 5.0), EngineSpec::relativistic(1.0, 5.0)] {
            let f = force(&engine, &ray(p), &vac_v, g).unwrap();
            assert_eq!(f, -g);
            assert_eq!(f.dot(p), 0.0);
        }
    }

    #[test]
    fn relativistic_wave_force_is_scaled_by_potential() {
        let medium = Medium {
            quantity: Quantity::Potential,
            form: MediumForm::Uniform { value: 1.0 },
            domain: None,
        };
        let engine = EngineSpec::relativistic(1.0, 3.0);
        let g = Vec2::new(0.5, 0.0);
        let f = force(&engine, &ray(Vec2::new(0.0, 3.0)), &medium, g).unwrap();
        let scale = 1.0 / (1.0 - 1.0 / engine.energy());
        assert!((f.x + 0.5 * scale).abs() < 1e-15);
    }

    #[test]
    fn forbidden_region_is_reported() {
        let vac_v = Medium::vacuum(Quantity::Potential);
        let r = EngineSpec::relativistic(0.0, 1.0);
        let err = hamiltonian_value(&r, &ray(Vec2::new(0.0, 1.0)), &vac_v, -10.0).unwrap_err();
        assert_eq!(err, Fault::ImaginaryMomentum);
        let well = Medium {
            quantity: Quantity::Potential,
            form: MediumForm::Uniform { value: 2.0 },
            domain: None,
        };
        assert!(matches!(
            ray_velocity(&r, &ray(Vec2::new(0.0, 1.0)), &well),
            Err(Fault::SingularVelocity { .. })
        ));
    }
}
