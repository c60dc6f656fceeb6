use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineKind, EngineSpec, GradientScheme};
use crate::error::ConfigError;
use crate::scenario::{Domain, LaunchProfile, LaunchShape, Medium, MediumForm, Quantity, Slit};
use crate::vec2::Vec2;

/// A validated scenario: what to launch, where, with which engine, and for
/// how long.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub engine: EngineSpec,
    pub medium: Medium,
    pub launch: LaunchProfile,
    pub dt: f64,
    pub steps: usize,
    pub output_cadence: usize,
    pub output_dir: Option<String>,
    /// Longitudinal stations z at which transverse profiles are sampled.
    pub planes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    engine: EngineSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    medium: Option<MediumSection>,
    launch: LaunchSection,
    integration: IntegrationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<OutputSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EngineSection {
    kind: EngineKind,
    #[serde(default)]
    eikonal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda0_over_w0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k0: Option<f64>,
    #[serde(default, rename = "E", skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wave_gradient: Option<GradientScheme>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MediumKind {
    Vacuum,
    Refractive,
    Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FormKind {
    Uniform,
    Linear,
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediumSection {
    kind: MediumKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<FormKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gradient: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    /// `[x_min, x_max, z_min, z_max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LaunchKind {
    Gaussian,
    Slits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaunchSection {
    kind: LaunchKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w0: Option<f64>,
    ray_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slits: Option<Vec<SlitSection>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlitSection {
    center: f64,
    width: f64,
    peak_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    steps: usize,
    #[serde(default = "one")]
    output_cadence: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dir: Option<String>,
    #[serde(default)]
    planes: Vec<f64>,
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Document = toml::from_str(text)?;
    ScenarioConfig::from_document(doc)
}

fn require<T>(value: Option<T>, path: &str, why: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::invalid(path, why))
}

fn forbid<T>(value: &Option<T>, path: &str, why: &str) -> Result<(), ConfigError> {
    match value {
        Some(_) => Err(ConfigError::invalid(path, why)),
        None => Ok(()),
    }
}

fn positive(value: f64, path: &str) -> Result<f64, ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::invalid(path, format!("must be positive, got {value}")))
    }
}

fn finite(value: f64, path: &str) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::invalid(path, "must be finite"))
    }
}

impl ScenarioConfig {
    fn from_document(doc: Document) -> Result<Self, ConfigError> {
        let launch = launch_profile(&doc.launch)?;
        let engine = engine_spec(&doc.engine, &launch)?;
        let medium = medium(doc.medium.as_ref(), &engine)?;

        let integration = &doc.integration;
        if integration.steps < 1 {
            return Err(ConfigError::invalid("integration.steps", "must be at least 1"));
        }
        if integration.output_cadence < 1 {
            return Err(ConfigError::invalid(
                "integration.output_cadence",
                "must be at least 1",
            ));
        }
        let dt = match integration.dt {
            Some(dt) => positive(dt, "integration.dt")?,
            None => engine.wavelength() / (20.0 * engine.launch_speed()),
        };

        let (output_dir, planes) = match doc.output {
            Some(out) => {
                for (i, &z) in out.planes.iter().enumerate() {
                    finite(z, &format!("output.planes[{i}]"))?;
                }
                (out.dir, out.planes)
            }
            None => (None, Vec::new()),
        };

        Ok(ScenarioConfig {
            engine,
            medium,
            launch,
            dt,
            steps: integration.steps,
            output_cadence: integration.output_cadence,
            output_dir,
            planes,
        })
    }

    /// Parses the scenario stored under a key of a larger document, such as
    /// a run manifest.
    pub fn from_value(value: toml::Value) -> Result<Self, ConfigError> {
        let doc: Document = value.try_into()?;
        Self::from_document(doc)
    }

    /// Scenario document that parses back to this configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_document()).expect("scenario documents always serialise")
    }

    pub fn to_value(&self) -> toml::Value {
        toml::Value::try_from(self.to_document()).expect("scenario documents always serialise")
    }

    fn to_document(&self) -> Document {
        let e = &self.engine;
        let (k0, energy) = if e.energy_given() {
            (None, Some(e.energy()))
        } else {
            (Some(e.wavenumber()), None)
        };
        let engine = EngineSection {
            kind: e.kind,
            eikonal: e.eikonal,
            lambda0_over_w0: None,
            k0,
            energy,
            m: (e.kind == EngineKind::Quantum).then(|| e.mass()),
            m0: (e.kind == EngineKind::Relativistic).then(|| e.mass()),
            wave_gradient: Some(e.scheme),
        };

        let m = &self.medium;
        let mut medium = MediumSection {
            kind: match (m.quantity, &m.form) {
                (_, MediumForm::Vacuum) => MediumKind::Vacuum,
                (Quantity::Index, _) => MediumKind::Refractive,
                (Quantity::Potential, _) => MediumKind::Potential,
            },
            form: None,
            value: None,
            gradient: None,
            omega: None,
            domain: m.domain.map(|d| [d.x_min, d.x_max, d.z_min, d.z_max]),
        };
        match m.form {
            MediumForm::Vacuum => {}
            MediumForm::Uniform { value } => {
                medium.form = Some(FormKind::Uniform);
                medium.value = Some(value);
            }
            MediumForm::Linear { value, gradient } => {
                medium.form = Some(FormKind::Linear);
                medium.value = Some(value);
                medium.gradient = Some([gradient.x, gradient.z]);
            }
            MediumForm::Harmonic { omega, .. } => {
                medium.form = Some(FormKind::Harmonic);
                medium.omega = Some(omega);
            }
        }

        let launch = match &self.launch.shape {
            LaunchShape::Gaussian {
                w0,
                truncation_factor,
            } => LaunchSection {
                kind: LaunchKind::Gaussian,
                w0: Some(*w0),
                ray_count: self.launch.ray_count,
                truncation_factor: Some(*truncation_factor),
                slits: None,
            },
            LaunchShape::Slits(slits) => LaunchSection {
                kind: LaunchKind::Slits,
                w0: None,
                ray_count: self.launch.ray_count,
                truncation_factor: None,
                slits: Some(
                    slits
                        .iter()
                        .map(|s| SlitSection {
                            center: s.center,
                            width: s.width,
                            peak_width: s.peak_width,
                        })
                        .collect(),
                ),
            },
        };

        Document {
            engine,
            medium: Some(medium),
            launch,
            integration: IntegrationSection {
                dt: Some(self.dt),
                steps: self.steps,
                output_cadence: self.output_cadence,
            },
            output: Some(OutputSection {
                dir: self.output_dir.clone(),
                planes: self.planes.clone(),
            }),
        }
    }

    /// Rayleigh length `π·w0²/λ0` of a gaussian launch.
    pub fn rayleigh_length(&self) -> Option<f64> {
        match self.launch.shape {
            LaunchShape::Gaussian { w0, .. } => Some(PI * w0 * w0 / self.engine.wavelength()),
            LaunchShape::Slits(_) => None,
        }
    }
}

fn launch_profile(s: &LaunchSection) -> Result<LaunchProfile, ConfigError> {
    let shape = match s.kind {
        LaunchKind::Gaussian => {
            forbid(&s.slits, "launch.slits", "only valid for a slits launch")?;
            LaunchShape::Gaussian {
                w0: require(s.w0, "launch.w0", "required for a gaussian launch")?,
                truncation_factor: s
                    .truncation_factor
                    .unwrap_or(LaunchProfile::DEFAULT_TRUNCATION),
            }
        }
        LaunchKind::Slits => {
            forbid(&s.w0, "launch.w0", "only valid for a gaussian launch")?;
            forbid(
                &s.truncation_factor,
                "launch.truncation_factor",
                "only valid for a gaussian launch; slit spans end at the outer apertures",
            )?;
            let slits = require(s.slits.as_ref(), "launch.slits", "required for a slits launch")?;
            LaunchShape::Slits(
                slits
                    .iter()
                    .map(|s| Slit {
                        center: s.center,
                        width: s.width,
                        peak_width: s.peak_width,
                    })
                    .collect(),
            )
        }
    };
    let profile = LaunchProfile {
        shape,
        ray_count: s.ray_count,
    };
    profile.validate()?;
    Ok(profile)
}

fn engine_spec(s: &EngineSection, launch: &LaunchProfile) -> Result<EngineSpec, ConfigError> {
    let given = [s.lambda0_over_w0.is_some(), s.k0.is_some(), s.energy.is_some()]
        .iter()
        .filter(|&&g| g)
        .count();
    if given != 1 {
        return Err(ConfigError::invalid(
            "engine",
            "give exactly one of lambda0_over_w0, k0 or E",
        ));
    }
    let k0 = match (s.lambda0_over_w0, s.k0) {
        (Some(ratio), _) => {
            let ratio = positive(ratio, "engine.lambda0_over_w0")?;
            let LaunchShape::Gaussian { w0, .. } = launch.shape else {
                return Err(ConfigError::invalid(
                    "engine.lambda0_over_w0",
                    "needs a gaussian launch to fix w0; give k0 instead",
                ));
            };
            Some(2.0 * PI / (ratio * w0))
        }
        (None, Some(k0)) => Some(positive(k0, "engine.k0")?),
        (None, None) => None,
    };
    let spec = match s.kind {
        EngineKind::Optical => {
            forbid(&s.energy, "engine.E", "the optical engine is set by k0 or lambda0_over_w0")?;
            forbid(&s.m, "engine.m", "not used by the optical engine")?;
            forbid(&s.m0, "engine.m0", "not used by the optical engine")?;
            EngineSpec::optical(k0.expect("one reference is given"))
        }
        EngineKind::Quantum => {
            forbid(&s.m0, "engine.m0", "the quantum engine takes m")?;
            let m = positive(s.m.unwrap_or(1.0), "engine.m")?;
            match k0 {
                Some(k0) => EngineSpec::quantum(m, k0),
                None => EngineSpec::quantum_with_energy(m, positive(s.energy.unwrap(), "engine.E")?),
            }
        }
        EngineKind::Relativistic => {
            forbid(&s.m, "engine.m", "the relativistic engine takes the rest mass m0")?;
            let m0 = s.m0.unwrap_or(0.0);
            if !(m0.is_finite() && m0 >= 0.0) {
                return Err(ConfigError::invalid("engine.m0", "must be non-negative"));
            }
            match k0 {
                Some(k0) => EngineSpec::relativistic(m0, k0),
                None => {
                    let e = positive(s.energy.unwrap(), "engine.E")?;
                    if !(e > m0) {
                        return Err(ConfigError::invalid(
                            "engine.E",
                            format!("must exceed the rest energy m0 = {m0}"),
                        ));
                    }
                    EngineSpec::relativistic_with_energy(m0, e)
                }
            }
        }
    };
    Ok(spec
        .with_eikonal(s.eikonal)
        .with_scheme(s.wave_gradient.unwrap_or_default()))
}

fn medium(s: Option<&MediumSection>, engine: &EngineSpec) -> Result<Medium, ConfigError> {
    let quantity = engine.medium_quantity();
    let Some(s) = s else {
        return Ok(Medium::vacuum(quantity));
    };
    match (s.kind, quantity) {
        (MediumKind::Refractive, Quantity::Potential) => {
            return Err(ConfigError::invalid(
                "medium.kind",
                "a refractive medium needs the optical engine",
            ))
        }
        (MediumKind::Potential, Quantity::Index) => {
            return Err(ConfigError::invalid(
                "medium.kind",
                "a potential medium needs a particle engine",
            ))
        }
        _ => {}
    }
    let domain = match s.domain {
        Some([x_min, x_max, z_min, z_max]) => {
            for v in [x_min, x_max, z_min, z_max] {
                finite(v, "medium.domain")?;
            }
            if !(x_min < x_max && z_min < z_max) {
                return Err(ConfigError::invalid(
                    "medium.domain",
                    "expected [x_min, x_max, z_min, z_max] with min < max",
                ));
            }
            Some(Domain {
                x_min,
                x_max,
                z_min,
                z_max,
            })
        }
        None => None,
    };
    let form = if s.kind == MediumKind::Vacuum {
        forbid(&s.form, "medium.form", "vacuum has no form")?;
        forbid(&s.value, "medium.value", "vacuum has no value")?;
        forbid(&s.gradient, "medium.gradient", "vacuum has no gradient")?;
        forbid(&s.omega, "medium.omega", "vacuum has no omega")?;
        MediumForm::Vacuum
    } else {
        match require(s.form, "medium.form", "uniform, linear or harmonic")? {
            FormKind::Uniform => {
                forbid(&s.gradient, "medium.gradient", "only for a linear form")?;
                forbid(&s.omega, "medium.omega", "only for a harmonic form")?;
                MediumForm::Uniform {
                    value: finite(require(s.value, "medium.value", "required")?, "medium.value")?,
                }
            }
            FormKind::Linear => {
                forbid(&s.omega, "medium.omega", "only for a harmonic form")?;
                let [gx, gz] = require(s.gradient, "medium.gradient", "required for a linear form")?;
                MediumForm::Linear {
                    value: finite(require(s.value, "medium.value", "required")?, "medium.value")?,
                    gradient: Vec2::new(finite(gx, "medium.gradient")?, finite(gz, "medium.gradient")?),
                }
            }
            FormKind::Harmonic => {
                if quantity != Quantity::Potential {
                    return Err(ConfigError::invalid(
                        "medium.form",
                        "harmonic is a potential form",
                    ));
                }
                forbid(&s.value, "medium.value", "only for uniform and linear forms")?;
                forbid(&s.gradient, "medium.gradient", "only for a linear form")?;
                let mass = engine.mass();
                if !(mass > 0.0) {
                    return Err(ConfigError::invalid(
                        "medium.form",
                        "a harmonic potential needs a positive mass",
                    ));
                }
                MediumForm::Harmonic {
                    mass,
                    omega: positive(require(s.omega, "medium.omega", "required")?, "medium.omega")?,
                }
            }
        }
    };
    Ok(Medium {
        quantity,
        form,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG1: &str = r#"
[engine]
kind = "optical"
lambda0_over_w0 = 2e-4

[launch]
kind = "gaussian"
w0 = 1.0
ray_count = 201

[integration]
dt = 15.707963267948966
steps = 3000
"#;

    #[test]
    fn reference_beam_wavenumber() {
        let cfg = parse_config(FIG1).unwrap();
        let k0w0 = cfg.engine.wavenumber() * 1.0;
        assert!((k0w0 - 2.0 * PI / 2e-4).abs() < 1e-9);
        assert!((k0w0 - 31415.93).abs() < 0.01);
        assert_eq!(cfg.medium, Medium::vacuum(Quantity::Index));
        assert_eq!(cfg.output_cadence, 1);
        assert_eq!(cfg.launch.half_width(), 4.0);
    }

    #[test]
    fn missing_engine_block_is_named() {
        let text = FIG1.replace("[engine]\nkind = \"optical\"\nlambda0_over_w0 = 2e-4\n", "");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("engine"), "{err}");
    }

    #[test]
    fn two_rays_cite_the_minimum() {
        let err = parse_config(&FIG1.replace("ray_count = 201", "ray_count = 2")).unwrap_err();
        assert!(err.to_string().contains("launch.ray_count"), "{err}");
        assert!(err.to_string().contains('3'), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse_config(&FIG1.replace("w0 = 1.0", "w0 = 1.0\nwaist = 2.0")).unwrap_err();
        assert!(err.to_string().contains("waist"), "{err}");
        let err = parse_config(&format!("{FIG1}\n[extras]\nx = 1\n")).unwrap_err();
        assert!(err.to_string().contains("extras"), "{err}");
    }

    #[test]
    fn zero_steps_are_invalid() {
        let err = parse_config(&FIG1.replace("steps = 3000", "steps = 0")).unwrap_err();
        assert!(err.to_string().contains("integration.steps"), "{err}");
    }

    #[test]
    fn default_step_resolves_a_twentieth_wavelength() {
        let text = FIG1.replace("dt = 15.707963267948966\n", "");
        let cfg = parse_config(&text).unwrap();
        assert!((cfg.dt - 2e-4 / 20.0).abs() < 1e-18);
    }

    #[test]
    fn mismatched_medium_and_engine() {
        let text = format!("{FIG1}\n[medium]\nkind = \"potential\"\nform = \"uniform\"\nvalue = 1.0\n");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("medium.kind"), "{err}");
    }

    #[test]
    fn reference_must_be_unique() {
        let err = parse_config(&FIG1.replace("lambda0_over_w0 = 2e-4", "lambda0_over_w0 = 2e-4\nk0 = 3.0"))
            .unwrap_err();
        assert!(err.to_string().contains("exactly one"), "{err}");
    }

    fn configs() -> impl Strategy<Value = ScenarioConfig> {
        let engine = prop_oneof![
            (1.0..1e4f64).prop_map(EngineSpec::optical),
            (0.1..10.0f64, 1.0..1e4f64).prop_map(|(m, k)| EngineSpec::quantum(m, k)),
            (0.1..10.0f64, 1.0..1e3f64).prop_map(|(m, e)| EngineSpec::quantum_with_energy(m, e)),
            (0.0..10.0f64, 1.0..1e4f64).prop_map(|(m, k)| EngineSpec::relativistic(m, k)),
            (0.0..10.0f64, 1.0..10.0f64).prop_map(|(m, e)| EngineSpec::relativistic_with_energy(m, m + e)),
        ];
        let launch = prop_oneof![
            (0.1..5.0f64, 3usize..500, 1.0..5.0f64).prop_map(|(w0, n, t)| LaunchProfile {
                shape: LaunchShape::Gaussian { w0, truncation_factor: t },
                ray_count: n,
            }),
            (1.0..5.0f64, 3usize..500).prop_map(|(d, n)| LaunchProfile {
                shape: LaunchShape::Slits(vec![
                    Slit { center: -d, width: d, peak_width: 1.0 },
                    Slit { center: d, width: d, peak_width: 1.0 },
                ]),
                ray_count: n,
            }),
        ];
        (
            engine,
            any::<bool>(),
            any::<bool>(),
            launch,
            1e-6..1.0f64,
            1usize..100_000,
            1usize..50,
            proptest::collection::vec(-1e3..1e3f64, 0..4),
            proptest::option::of("[a-z]{1,8}"),
            -1.0..1.0f64,
        )
            .prop_map(|(engine, eikonal, stencil, launch, dt, steps, cadence, planes, dir, slope)| {
                let scheme = if stencil { GradientScheme::Stencil } else { GradientScheme::Variational };
                let quantity = engine.medium_quantity();
                let form = if slope > 0.5 {
                    MediumForm::Vacuum
                } else {
                    MediumForm::Linear { value: quantity.vacuum_value(), gradient: Vec2::new(slope * 1e-3, 0.0) }
                };
                ScenarioConfig {
                    engine: engine.with_eikonal(eikonal).with_scheme(scheme),
                    medium: Medium { quantity, form, domain: None },
                    launch,
                    dt,
                    steps,
                    output_cadence: cadence,
                    output_dir: dir,
                    planes,
                }
            })
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(cfg in configs()) {
            let text = cfg.to_toml();
            prop_assert_eq!(parse_config(&text).unwrap(), cfg);
        }
    }
}
