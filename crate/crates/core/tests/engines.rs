use wavetrace::{
    parse_config, prime, run, step_bundle, EngineSpec, GradientScheme, LaunchProfile, Medium,
    MediumForm, Quantity, Ray, ScenarioConfig, Vec2, Wavefront,
};

const GAUSSIAN: &str = include_str!("../../../scenarios/gaussian_beam.toml");

fn fan(engine: &EngineSpec, offsets: &[f64]) -> Wavefront {
    let p0 = engine.momentum();
    let rays = offsets
        .iter()
        .enumerate()
        .map(|(i, &x)| Ray::new(i, Vec2::new(x, 0.0), Vec2::new(0.0, p0), 1.0))
        .collect();
    let mut front = Wavefront::new(rays);
    prime(&mut front, engine).unwrap();
    front
}

fn relative(a: Vec2, b: Vec2) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn assert_reversible(engine: EngineSpec, medium: Medium, dt: f64, steps: usize) {
    let start = fan(&engine, &[-1.0, -0.5, 0.0, 0.5, 1.0]);
    let mut front = start.clone();
    for _ in 0..steps {
        front = step_bundle(&front, &engine, &medium, dt).unwrap();
    }
    let moved = (front.rays[0].position - start.rays[0].position).norm();
    assert!(moved > 0.5, "{:?} barely moved", engine.kind);
    for _ in 0..steps {
        front = step_bundle(&front, &engine, &medium, -dt).unwrap();
    }
    for (end, begin) in front.rays.iter().zip(&start.rays) {
        let dr = (end.position - begin.position).norm() / begin.position.norm().max(1.0);
        let dp = relative(end.momentum, begin.momentum);
        assert!(dr < 1e-9 && dp < 1e-9, "{:?} ray {}: {dr:e} {dp:e}", engine.kind, end.id);
    }
}

fn harmonic() -> Medium {
    Medium {
        quantity: Quantity::Potential,
        form: MediumForm::Harmonic {
            mass: 1.0,
            omega: 1.0,
        },
        domain: None,
    }
}

#[test]
fn eikonal_quantum_run_retraces_itself() {
    let engine = EngineSpec::quantum(1.0, 1.0).with_eikonal(true);
    assert_reversible(engine, harmonic(), 1.2e-3, 1000);
}

#[test]
fn eikonal_relativistic_run_retraces_itself() {
    let engine = EngineSpec::relativistic(1.0, 1.0).with_eikonal(true);
    assert_reversible(engine, harmonic(), 1.2e-3, 1000);
}

#[test]
fn eikonal_optical_run_retraces_itself() {
    let engine = EngineSpec::optical(50.0).with_eikonal(true);
    let medium = Medium {
        quantity: Quantity::Index,
        form: MediumForm::Linear {
            value: 1.0,
            gradient: Vec2::new(-0.02, 0.0),
        },
        domain: None,
    };
    assert_reversible(engine, medium, 0.05, 1000);
}

fn near_threshold(relativistic: bool) -> ScenarioConfig {
    let kinetic = 1e-4;
    let engine = if relativistic {
        "kind = \"relativistic\"\nm0 = 1.0\nE = 1.0001".to_string()
    } else {
        let p = ((1.0f64 + kinetic).powi(2) - 1.0).sqrt();
        format!("kind = \"quantum\"\nm = 1.0\nk0 = {p:?}")
    };
    let text = format!(
        "[engine]\n{engine}\n\n[launch]\nkind = \"gaussian\"\nw0 = 2000.0\nray_count = 101\n\n\
         [integration]\ndt = 1000.0\nsteps = 1200\noutput_cadence = 20\n"
    );
    parse_config(&text).unwrap()
}

#[test]
fn relativistic_engine_reduces_to_quantum_near_threshold() {
    let rel = run(&near_threshold(true)).unwrap();
    let qm = run(&near_threshold(false)).unwrap();
    let w0 = 2000.0;
    let ray = 75;
    let x0 = qm.launch.rays[ray].position.x;
    let spread = qm.final_front.rays[ray].position.x - x0;
    assert!(spread > 0.1 * w0, "beam hardly diffracted: {spread}");
    let mut worst = 0.0f64;
    for (a, b) in rel.records.iter().zip(&qm.records) {
        let dx_rel = a.rays[ray].position.x - x0;
        let dx_qm = b.rays[ray].position.x - x0;
        if dx_qm.abs() > 1e-3 * w0 {
            worst = worst.max((dx_rel - dx_qm).abs() / dx_qm.abs());
        }
    }
    assert!(worst > 0.0 && worst < 1e-3, "{worst:e}");
}

#[test]
fn runs_are_deterministic() {
    let mut config = parse_config(GAUSSIAN).unwrap();
    config.steps = 300;
    config.planes.truncate(2);
    let a = run(&config).unwrap();
    let b = run(&config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn stencil_scheme_diffracts_a_beam_symmetrically() {
    let mut config = parse_config(GAUSSIAN).unwrap();
    config.engine = config.engine.with_scheme(GradientScheme::Stencil);
    config.steps = 60;
    config.planes.clear();
    let out = run(&config).unwrap();
    let n = out.final_front.len();
    let launch = &out.launch.rays;
    let end = &out.final_front.rays;
    for i in 0..n / 2 {
        assert_eq!(end[i].position.x, -end[n - 1 - i].position.x);
        if i > 0 {
            assert!(end[i].position.x.abs() > launch[i].position.x.abs());
        }
    }
    assert!(!out.final_front.caustic);
}

#[test]
fn stencil_scheme_breaks_down_in_the_tails() {
    let mut config = parse_config(GAUSSIAN).unwrap();
    config.engine = config.engine.with_scheme(GradientScheme::Stencil);
    config.steps = 500;
    config.planes.clear();
    let Err(wavetrace::RunError::Engine(failure)) = run(&config) else {
        panic!("stencil run survived 500 steps");
    };
    assert!(failure.error.is_caustic());
    assert!(failure.error.ray < 20 || failure.error.ray > 180);
    config.engine = config.engine.with_scheme(GradientScheme::Variational);
    assert!(run(&config).is_ok());
}

#[test]
fn gaussian_launch_matches_profile() {
    let engine = EngineSpec::optical(100.0);
    let profile = LaunchProfile::gaussian(1.0, 21);
    let front = wavetrace::build_launch(&profile, &engine).unwrap();
    assert_eq!(front.rays[0].position.x, -4.0);
    assert_eq!(front.rays[10].position.x, 0.0);
    for ray in &front.rays {
        let x = ray.position.x;
        approx::assert_relative_eq!(ray.amplitude, (-x * x).exp(), max_relative = 1e-15);
    }
}
