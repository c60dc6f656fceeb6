use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cli::exit;
use crate::engine::{run, RunError, RunOutput};
use crate::error::EngineError;
use crate::scenario::{parse_config, ScenarioConfig};

pub const TRAJECTORY_FILE: &str = "trajectories.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const MANIFEST_FILE: &str = "manifest.toml";

const TRAJECTORY_HEADER: &str = "ray_id,step,t,x,z,px,pz,R,Q,H";
const PROFILE_HEADER: &str = "ray_id,x,intensity";

/// `profile_<z>.csv`, with z in its shortest round-trip form.
pub fn profile_file_name(z: f64) -> String {
    format!("profile_{z}.csv")
}

/// 17 significant digits.
pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn short(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.3e}")
    }
}

/// Runs the scenario at `config_path`, writing tables, report and manifest
/// into `out_dir` (or the scenario's own `output.dir`). Returns the exit status.
pub fn cmd_run(config_path: &Path, out_dir: Option<&Path>) -> i32 {
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return exit::CONFIG;
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config_path.display());
            return exit::CONFIG;
        }
    };
    let dir: PathBuf = match out_dir {
        Some(d) => d.to_path_buf(),
        None => match &config.output_dir {
            Some(d) => PathBuf::from(d),
            None => {
                eprintln!("error: no output directory; pass --out or set output.dir");
                return exit::CONFIG;
            }
        },
    };
    config.output_dir = Some(dir.to_string_lossy().into_owned());

    let (output, failure) = match run(&config) {
        Ok(out) => (out, None),
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return exit::CONFIG;
        }
        Err(RunError::Engine(f)) => (f.partial, Some(f.error)),
    };
    if let Err(e) = write_all(&dir, &config, &output, failure.as_ref()) {
        eprintln!("error: writing {}: {e}", dir.display());
        return exit::CONFIG;
    }
    match failure {
        Some(e) => {
            eprintln!("engine error: {e}");
            eprintln!("partial output kept in {}", dir.display());
            exit::ENGINE
        }
        None => exit::SUCCESS,
    }
}

fn write_all(
    dir: &Path,
    config: &ScenarioConfig,
    output: &RunOutput,
    failure: Option<&EngineError>,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_trajectories(&dir.join(TRAJECTORY_FILE), output)?;
    for plane in &output.planes {
        let mut rows: Vec<_> = plane.samples.iter().collect();
        rows.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut w = BufWriter::new(fs::File::create(dir.join(profile_file_name(plane.z)))?);
        writeln!(w, "{PROFILE_HEADER}")?;
        for s in rows {
            writeln!(w, "{},{},{}", s.id, num(s.x), num(s.amplitude * s.amplitude))?;
        }
        w.flush()?;
    }
    fs::write(dir.join(MANIFEST_FILE), manifest(config))?;
    fs::write(dir.join(REPORT_FILE), report(config, output, failure))
}

fn write_trajectories(path: &Path, output: &RunOutput) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for record in &output.records {
        for s in &record.rays {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                s.id,
                record.step,
                num(record.time),
                num(s.position.x),
                num(s.position.z),
                num(s.momentum.x),
                num(s.momentum.z),
                num(s.amplitude),
                num(s.potential),
                num(s.hamiltonian),
            )?;
        }
    }
    w.flush()
}

fn manifest(config: &ScenarioConfig) -> String {
    let e = &config.engine;
    let mut constants = toml::Table::new();
    constants.insert("hbar".into(), 1.0.into());
    constants.insert("c".into(), 1.0.into());
    constants.insert("k0".into(), e.wavenumber().into());
    constants.insert("lambda0".into(), e.wavelength().into());
    constants.insert("energy".into(), e.energy().into());
    constants.insert("mass".into(), e.mass().into());
    constants.insert("wave_coefficient".into(), e.wave_coefficient().into());
    if let Some(zr) = config.rayleigh_length() {
        constants.insert("rayleigh_length".into(), zr.into());
    }
    let mut doc = toml::Table::new();
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    doc.insert("constants".into(), constants.into());
    doc.insert("scenario".into(), config.to_value());
    format!(
        "# The [scenario] table is a complete scenario document for `wavetrace run`.\n{}",
        toml::to_string(&doc).expect("manifest tables always serialise")
    )
}

fn report(config: &ScenarioConfig, output: &RunOutput, failure: Option<&EngineError>) -> String {
    let e = &config.engine;
    let d = &output.diagnostics;
    let mut r = String::new();
    let _ = writeln!(r, "wavetrace {} run report", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        r,
        "engine: {:?}, k0 = {}, E = {}, mass = {}, eikonal = {}, wave gradient = {:?}",
        e.kind,
        e.wavenumber(),
        e.energy(),
        e.mass(),
        e.eikonal,
        e.scheme
    );
    let _ = writeln!(
        r,
        "rays: {}, dt = {}, steps completed: {} of {}",
        output.launch.len(),
        config.dt,
        output.final_front.step,
        config.steps
    );
    match failure {
        Some(err) => {
            let _ = writeln!(r, "status: aborted ({err})");
        }
        None => {
            let _ = writeln!(r, "status: completed");
        }
    }
    let _ = writeln!(r, "caustic: {}", output.final_front.caustic);
    let _ = writeln!(
        r,
        "max |H - H_launch| / energy scale: {} (ray {})",
        short(d.energy_drift),
        d.energy_drift_ray
    );
    let _ = writeln!(r, "max ||p| - p_launch| / p_launch: {}", short(d.momentum_drift));
    let _ = writeln!(r, "max tube flux drift: {}", short(d.flux_drift));
    let _ = writeln!(r, "max |Q|: {}", short(d.max_abs_potential));
    let _ = writeln!(r, "straight-line fit residual: {}", short(d.line_deviation));
    for plane in &output.planes {
        let _ = writeln!(
            r,
            "plane z = {}: {} of {} rays sampled",
            plane.z,
            plane.samples.len(),
            output.launch.len()
        );
    }
    r
}
