use crate::engine::dynamics::{medium_force, velocity, wave_force_scale};
use crate::engine::{EngineKind, EngineSpec};
use crate::error::{EngineError, Fault};
use crate::scenario::Medium;
use crate::transport::{transport, wave_potential, Wavefront};
use crate::vec2::Vec2;

pub const MIDPOINT_TOLERANCE: f64 = 1e-12;
pub const MIDPOINT_MAX_ITERATIONS: usize = 50;

/// Computes the closure (widths, potential, gradient) of a freshly launched
/// front so that the first step can reuse it.
pub fn prime(front: &mut Wavefront, engine: &EngineSpec) -> Result<(), EngineError> {
    let snapshot = front.clone();
    close(&snapshot, front, engine)
}

/// Transports amplitudes from `prev` onto `next` and refreshes the wave
/// potential cached on `next`'s rays.
fn close(prev: &Wavefront, next: &mut Wavefront, engine: &EngineSpec) -> Result<(), EngineError> {
    if next.is_coupled() {
        let (amplitudes, widths) = transport(prev, next)?;
        for ((ray, r), d) in next.rays.iter_mut().zip(amplitudes).zip(widths) {
            ray.amplitude = r;
            ray.tube_width = d;
            ray.tube_momentum = ray.momentum.norm();
        }
    }
    let field = wave_potential(next, engine)?;
    for (i, ray) in next.rays.iter_mut().enumerate() {
        ray.potential = field.values[i];
        ray.wave_gradient = field.tangential[i];
    }
    Ok(())
}

fn check_finite(front: &Wavefront) -> Result<(), EngineError> {
    for ray in &front.rays {
        if !(ray.position.is_finite() && ray.momentum.is_finite()) {
            return Err(EngineError::new(ray.id, Fault::NonFinite));
        }
        if ray.momentum.norm() == 0.0 {
            return Err(EngineError::new(ray.id, Fault::Stalled));
        }
    }
    Ok(())
}

/// Advances the bundle by one step of `dt`.
///
/// The optical and quantum engines use kick–drift–kick splitting. The medium
/// kick is additive; the wave-potential kick is the exact flow of a force of
/// fixed size along the ray's tangent, a rotation of the momentum. The
/// relativistic engine uses the implicit midpoint rule. `front` must carry a
/// current closure, from [`prime`] or a previous step.
pub fn step_bundle(
    front: &Wavefront,
    engine: &EngineSpec,
    medium: &Medium,
    dt: f64,
) -> Result<Wavefront, EngineError> {
    let step = front.step + 1;
    let mut next = front.clone();
    let result = match engine.kind {
        EngineKind::Optical | EngineKind::Quantum => split_step(front, &mut next, engine, medium, dt),
        EngineKind::Relativistic => midpoint_step(front, &mut next, engine, medium, dt),
    };
    result.map_err(|e| e.at_step(step))?;
    next.step = step;
    next.time = front.time + dt;
    Ok(next)
}

fn external_kick(
    ray: &mut crate::transport::Ray,
    engine: &EngineSpec,
    medium: &Medium,
    tau: f64,
) -> Result<(), EngineError> {
    let (value, gradient) = medium
        .evaluate(ray.position)
        .map_err(|f| EngineError::new(ray.id, f))?;
    if gradient != Vec2::ZERO {
        ray.momentum = ray.momentum + medium_force(engine, value, gradient) * tau;
    }
    Ok(())
}

/// Half of the split kick: medium then wave on the way in, wave then medium
/// on the way out, so the composed step stays symmetric.
fn half_kick(
    front: &mut Wavefront,
    engine: &EngineSpec,
    medium: &Medium,
    tau: f64,
    medium_first: bool,
) -> Result<(), EngineError> {
    let coupled = !engine.eikonal && front.is_coupled();
    for ray in &mut front.rays {
        if medium_first {
            external_kick(ray, engine, medium, tau)?;
        }
        if coupled && ray.wave_gradient != 0.0 {
            let angle = -ray.wave_gradient * tau / ray.momentum.norm();
            ray.momentum = ray.momentum.rotate(angle);
        }
        if !medium_first {
            external_kick(ray, engine, medium, tau)?;
        }
    }
    Ok(())
}

fn split_step(
    front: &Wavefront,
    next: &mut Wavefront,
    engine: &EngineSpec,
    medium: &Medium,
    dt: f64,
) -> Result<(), EngineError> {
    let tau = 0.5 * dt;
    half_kick(next, engine, medium, tau, true)?;
    for ray in &mut next.rays {
        let displacement = velocity(engine, ray.momentum, 0.0)
            .map_err(|f| EngineError::new(ray.id, f))?
            * dt;
        ray.position = ray.position + displacement;
        ray.phase += ray.momentum.dot(displacement);
    }
    check_finite(next)?;
    close(front, next, engine)?;
    half_kick(next, engine, medium, tau, false)?;
    check_finite(next)
}

/// Implicit midpoint for the whole bundle: each fixed-point sweep rebuilds
/// the closure on the midpoint front, so the coupling is treated as
/// implicitly as the ray dynamics.
fn midpoint_step(
    front: &Wavefront,
    next: &mut Wavefront,
    engine: &EngineSpec,
    medium: &Medium,
    dt: f64,
) -> Result<(), EngineError> {
    let coupled = !engine.eikonal && front.is_coupled();
    let mut mid = front.clone();
    let mut converged = false;
    for _ in 0..MIDPOINT_MAX_ITERATIONS {
        for ((m, start), end) in mid.rays.iter_mut().zip(&front.rays).zip(&next.rays) {
            m.position = (start.position + end.position) * 0.5;
            m.momentum = (start.momentum + end.momentum) * 0.5;
        }
        if coupled {
            close(front, &mut mid, engine)?;
        }
        let mut settled = true;
        for ((ray, start), m) in next.rays.iter_mut().zip(&front.rays).zip(&mid.rays) {
            let fail = |f: Fault| EngineError::new(ray.id, f);
            let (value, gradient) = medium.evaluate(m.position).map_err(fail)?;
            let v = velocity(engine, m.momentum, value).map_err(fail)?;
            let mut f = medium_force(engine, value, gradient);
            if coupled && m.wave_gradient != 0.0 {
                f = f - m.momentum.tangent() * (m.wave_gradient * wave_force_scale(engine, value));
            }
            let r_new = start.position + v * dt;
            let p_new = start.momentum + f * dt;
            if !(r_new.is_finite() && p_new.is_finite()) {
                return Err(fail(Fault::NonFinite));
            }
            let dr = (r_new - ray.position).norm();
            let dp = (p_new - ray.momentum).norm();
            let close_enough = dr
                <= MIDPOINT_TOLERANCE * (r_new - start.position).norm()
                    + 4.0 * f64::EPSILON * r_new.norm()
                && dp <= MIDPOINT_TOLERANCE * start.momentum.norm();
            settled &= close_enough;
            ray.position = r_new;
            ray.momentum = p_new;
        }
        if settled {
            converged = true;
            break;
        }
    }
    if !converged {
        let worst = front.rays.first().map_or(0, |r| r.id);
        return Err(EngineError::new(
            worst,
            Fault::MidpointDivergence {
                iterations: MIDPOINT_MAX_ITERATIONS,
            },
        ));
    }
    for ((ray, start), m) in next.rays.iter_mut().zip(&front.rays).zip(&mid.rays) {
        ray.phase = start.phase + m.momentum.dot(ray.position - start.position);
    }
    check_finite(next)?;
    close(front, next, engine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{build_launch, LaunchProfile, MediumForm, Quantity};
    use crate::transport::Ray;

    fn single(engine: &EngineSpec, x: f64) -> Wavefront {
        let p0 = engine.momentum();
        Wavefront::new(vec![Ray::new(0, Vec2::new(x, 0.0), Vec2::new(0.0, p0), 1.0)])
    }

    #[test]
    fn free_drift_of_a_single_eikonal_ray() {
        let engine = EngineSpec::quantum(2.0, 6.0).with_eikonal(true);
        let medium = Medium::vacuum(Quantity::Potential);
        let front = single(&engine, 0.25);
        let next = step_bundle(&front, &engine, &medium, 0.1).unwrap();
        assert_eq!(next.rays[0].position, Vec2::new(0.25, 6.0 * 0.1 / 2.0));
        assert_eq!(next.rays[0].momentum, Vec2::new(0.0, 6.0));
        assert_eq!(next.step, 1);
    }

    #[test]
    fn on_axis_ray_stays_on_axis() {
        let medium = Medium::vacuum(Quantity::Potential);
        for engine in [EngineSpec::quantum(1.0, 200.0), EngineSpec::relativistic(1.0, 200.0)] {
            let mut front = build_launch(&LaunchProfile::gaussian(1.0, 201), &engine).unwrap();
            prime(&mut front, &engine).unwrap();
            for _ in 0..200 {
                front = step_bundle(&front, &engine, &medium, 1e-3).unwrap();
                assert_eq!(front.rays[100].position.x, 0.0);
                assert_eq!(front.rays[100].momentum.x, 0.0);
            }
            assert!(front.rays[200].position.x > 4.0);
        }
    }

    #[test]
    fn escaping_the_domain_names_the_ray_and_step() {
        let engine = EngineSpec::quantum(1.0, 10.0).with_eikonal(true);
        let medium = Medium {
            quantity: Quantity::Potential,
            form: MediumForm::Uniform { value: 0.0 },
            domain: Some(crate::scenario::Domain {
                x_min: -1.0,
                x_max: 1.0,
                z_min: -1.0,
                z_max: 0.5,
            }),
        };
        let mut front = single(&engine, 0.0);
        let mut err = None;
        for _ in 0..10 {
            match step_bundle(&front, &engine, &medium, 0.02) {
                Ok(f) => front = f,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        let err = err.expect("ray should leave the box");
        assert_eq!(err.ray, 0);
        assert_eq!(err.step, 3);
        assert!(matches!(err.fault, Fault::DomainEscape { .. }));
    }
}
