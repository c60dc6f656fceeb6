use thiserror::Error;

use crate::engine::{hamiltonian_value, prime, step_bundle, EngineSpec};
use crate::error::{ConfigError, EngineError};
use crate::scenario::{build_launch, Medium, ScenarioConfig};
use crate::transport::{Ray, Wavefront};
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct RaySample {
    pub id: usize,
    pub position: Vec2,
    pub momentum: Vec2,
    pub amplitude: f64,
    pub potential: f64,
    pub hamiltonian: f64,
}

/// Snapshot of the bundle at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub rays: Vec<RaySample>,
}

/// A ray's state where it crosses an output plane, linearly interpolated in z
/// between the bracketing steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSample {
    pub id: usize,
    pub x: f64,
    pub amplitude: f64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneProfile {
    pub z: f64,
    /// One sample per ray that reached the plane, in ray order.
    pub samples: Vec<PlaneSample>,
}

/// Worst deviations seen over every ray and every step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// `|H − H_launch|` over the engine's energy scale, with `H_launch` the
    /// launch value without wave potential (E in vacuum).
    pub energy_drift: f64,
    pub energy_drift_ray: usize,
    /// `| |p| − |p_launch| | / |p_launch|`.
    pub momentum_drift: f64,
    /// Relative change of `R²·|p|·d` per tube.
    pub flux_drift: f64,
    pub max_abs_potential: f64,
    /// Largest distance of a ray from the straight line along its launch
    /// direction.
    pub line_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub launch: Wavefront,
    pub final_front: Wavefront,
    pub records: Vec<StepRecord>,
    pub planes: Vec<PlaneProfile>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub error: EngineError,
    /// Everything recorded up to the failing step.
    pub partial: RunOutput,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}", .0.error)]
    Engine(Box<RunFailure>),
}

struct Launch {
    hamiltonian: f64,
    momentum: f64,
    flux: f64,
    position: Vec2,
    direction: Vec2,
}

struct Tracker<'a> {
    engine: &'a EngineSpec,
    medium: &'a Medium,
    launch: Vec<Launch>,
    diagnostics: Diagnostics,
    planes: Vec<PlaneProfile>,
}

impl<'a> Tracker<'a> {
    fn new(front: &Wavefront, engine: &'a EngineSpec, medium: &'a Medium, planes: &[f64]) -> Result<Self, EngineError> {
        let launch = front
            .rays
            .iter()
            .map(|ray| {
                Ok(Launch {
                    hamiltonian: hamiltonian_value(engine, ray, medium, 0.0)
                        .map_err(|f| EngineError::new(ray.id, f))?,
                    momentum: ray.momentum.norm(),
                    flux: ray.flux(),
                    position: ray.position,
                    direction: ray.momentum,
                })
            })
            .collect::<Result<_, EngineError>>()?;
        let mut tracker = Tracker {
            engine,
            medium,
            launch,
            diagnostics: Diagnostics::default(),
            planes: planes
                .iter()
                .map(|&z| PlaneProfile { z, samples: Vec::new() })
                .collect(),
        };
        for plane in &mut tracker.planes {
            for ray in &front.rays {
                if ray.position.z == plane.z {
                    plane.samples.push(PlaneSample {
                        id: ray.id,
                        x: ray.position.x,
                        amplitude: ray.amplitude,
                        time: front.time,
                    });
                }
            }
        }
        Ok(tracker)
    }

    fn sample(&self, ray: &Ray) -> Result<RaySample, EngineError> {
        Ok(RaySample {
            id: ray.id,
            position: ray.position,
            momentum: ray.momentum,
            amplitude: ray.amplitude,
            potential: ray.potential,
            hamiltonian: hamiltonian_value(self.engine, ray, self.medium, ray.potential)
                .map_err(|f| EngineError::new(ray.id, f))?,
        })
    }

    fn observe(&mut self, front: &Wavefront) -> Result<Vec<RaySample>, EngineError> {
        let scale = self.engine.energy_scale();
        let coupled = front.is_coupled();
        let mut samples = Vec::with_capacity(front.len());
        for (ray, start) in front.rays.iter().zip(&self.launch) {
            let sample = self.sample(ray).map_err(|e| e.at_step(front.step))?;
            let d = &mut self.diagnostics;
            let drift = (sample.hamiltonian - start.hamiltonian).abs() / scale;
            if drift > d.energy_drift {
                d.energy_drift = drift;
                d.energy_drift_ray = ray.id;
            }
            d.momentum_drift = d
                .momentum_drift
                .max((ray.momentum.norm() - start.momentum).abs() / start.momentum);
            if coupled {
                d.flux_drift = d.flux_drift.max((ray.flux() - start.flux).abs() / start.flux);
            }
            d.max_abs_potential = d.max_abs_potential.max(ray.potential.abs());
            d.line_deviation = d
                .line_deviation
                .max((ray.position - start.position).across(start.direction).abs());
            samples.push(sample);
        }
        Ok(samples)
    }

    fn cross_planes(&mut self, before: &Wavefront, after: &Wavefront) {
        for plane in &mut self.planes {
            for (a, b) in before.rays.iter().zip(&after.rays) {
                let (za, zb) = (a.position.z, b.position.z);
                if za < plane.z && plane.z <= zb {
                    let f = (plane.z - za) / (zb - za);
                    plane.samples.push(PlaneSample {
                        id: a.id,
                        x: a.position.x + f * (b.position.x - a.position.x),
                        amplitude: a.amplitude + f * (b.amplitude - a.amplitude),
                        time: before.time + f * (after.time - before.time),
                    });
                }
            }
        }
    }

    fn finish(mut self, launch: Wavefront, final_front: Wavefront, records: Vec<StepRecord>) -> RunOutput {
        for plane in &mut self.planes {
            plane.samples.sort_by_key(|s| s.id);
        }
        RunOutput {
            launch,
            final_front,
            records,
            planes: self.planes,
            diagnostics: self.diagnostics,
        }
    }
}

/// Launches the configured bundle and integrates it for `config.steps` steps,
/// recording every `output_cadence` steps, the final step, and every crossing
/// of an output plane.
pub fn run(config: &ScenarioConfig) -> Result<RunOutput, RunError> {
    let engine = &config.engine;
    let medium = &config.medium;
    let mut front = build_launch(&config.launch, engine)?;
    let fail = |error: EngineError, partial: RunOutput| {
        RunError::Engine(Box::new(RunFailure { error, partial }))
    };
    let empty = |front: &Wavefront| RunOutput {
        launch: front.clone(),
        final_front: front.clone(),
        records: Vec::new(),
        planes: Vec::new(),
        diagnostics: Diagnostics::default(),
    };
    if let Err(e) = prime(&mut front, engine) {
        return Err(fail(e, empty(&front)));
    }
    let launch = front.clone();
    let mut tracker = match Tracker::new(&front, engine, medium, &config.planes) {
        Ok(t) => t,
        Err(e) => return Err(fail(e, empty(&front))),
    };
    let mut records = Vec::new();
    match tracker.observe(&front) {
        Ok(rays) => records.push(StepRecord { step: 0, time: 0.0, rays }),
        Err(e) => return Err(fail(e, empty(&front))),
    }
    for step in 1..=config.steps {
        let next = match step_bundle(&front, engine, medium, config.dt) {
            Ok(next) => next,
            Err(e) => {
                let mut last = front;
                last.caustic = e.is_caustic();
                return Err(fail(e, tracker.finish(launch, last, records)));
            }
        };
        tracker.cross_planes(&front, &next);
        match tracker.observe(&next) {
            Ok(rays) => {
                if step % config.output_cadence == 0 || step == config.steps {
                    records.push(StepRecord {
                        step,
                        time: next.time,
                        rays,
                    });
                }
            }
            Err(e) => return Err(fail(e, tracker.finish(launch, next, records))),
        }
        front = next;
    }
    Ok(tracker.finish(launch, front, records))
}
