use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cli::exit;
use crate::cli::output::{short, MANIFEST_FILE, REPORT_FILE, TRAJECTORY_FILE};
use crate::cli::profile_file_name;
use crate::oracles::{paraxial_amplitude, two_slit_fringe_positions, waist_line, ParaxialGaussian};
use crate::scenario::{LaunchShape, ScenarioConfig};

struct Row {
    ray: usize,
    x: f64,
    z: f64,
}

fn read_table(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        let fields: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        match fields {
            Ok(f) if f.len() == columns => rows.push(f),
            _ => return Err(format!("{}: malformed line {}", path.display(), n + 1)),
        }
    }
    Ok(rows)
}

#[derive(Default)]
struct Stats {
    max: f64,
    sum: f64,
    count: usize,
}

impl Stats {
    fn push(&mut self, v: f64) {
        self.max = self.max.max(v);
        self.sum += v;
        self.count += 1;
    }

    fn line(&self) -> String {
        if self.count == 0 {
            "no samples".to_string()
        } else {
            format!(
                "max {}, mean {} over {} samples",
                short(self.max),
                short(self.sum / self.count as f64),
                self.count
            )
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn fitted_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), (x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Positions of local maxima of a profile sorted by x, ignoring those below
/// `floor` of the highest sample.
pub fn intensity_maxima(profile: &[(f64, f64)], floor: f64) -> Vec<f64> {
    let peak = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    profile
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1 && w[1].1 > floor * peak)
        .map(|w| w[1].0)
        .collect()
}

/// Recomputes the analytic references for a finished run in `dir` and
/// appends the deviations to its report. Returns the exit status.
pub fn cmd_compare(dir: &Path) -> i32 {
    match compare(dir) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit::CONFIG
        }
    }
}

fn compare(dir: &Path) -> Result<(), String> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest: toml::Table = fs::read_to_string(&manifest_path)
        .map_err(|e| format!("cannot read {}: {e}", manifest_path.display()))?
        .parse()
        .map_err(|e| format!("{}: {e}", manifest_path.display()))?;
    let scenario = manifest
        .get("scenario")
        .cloned()
        .ok_or_else(|| format!("{}: no [scenario] table", manifest_path.display()))?;
    let config = ScenarioConfig::from_value(scenario).map_err(|e| e.to_string())?;
    let rows: Vec<Row> = read_table(&dir.join(TRAJECTORY_FILE), 10)?
        .into_iter()
        .map(|f| Row {
            ray: f[0] as usize,
            x: f[3],
            z: f[4],
        })
        .collect();

    let mut out = String::from("\ncomparison with analytic references\n");
    let lambda0 = config.engine.wavelength();

    let launch_x = |ray: usize| {
        rows.iter()
            .find(|r| r.ray == ray)
            .map(|r| r.x)
            .unwrap_or(f64::NAN)
    };
    let n_rays = rows.iter().map(|r| r.ray + 1).max().unwrap_or(0);
    let mut straight = 0.0f64;
    for r in &rows {
        straight = straight.max((r.x - launch_x(r.ray)).abs());
    }
    let _ = writeln!(out, "deviation from straight lines: {}", short(straight));

    match &config.launch.shape {
        LaunchShape::Gaussian { w0, .. } => {
            let beam = ParaxialGaussian::new(*w0, lambda0);
            let zr = beam.rayleigh_length();
            // The ray launched nearest the waist radius; its oracle is the
            // waist line scaled by its launch offset.
            let tracked = (0..n_rays)
                .min_by(|&a, &b| (launch_x(a) - w0).abs().total_cmp(&(launch_x(b) - w0).abs()))
                .ok_or("empty trajectory table")?;
            let scale = launch_x(tracked) / w0;
            let mut along = Stats::default();
            let mut far = Vec::new();
            for r in rows.iter().filter(|r| r.ray == tracked) {
                let expected = scale * waist_line(&beam, r.z);
                along.push((r.x - expected).abs() / expected);
                if (2.0 * zr..=3.0 * zr).contains(&r.z) {
                    far.push((r.z, r.x));
                }
            }
            let _ = writeln!(
                out,
                "waist line (ray {tracked}, launched at x = {}): relative deviation {}",
                launch_x(tracked),
                along.line()
            );
            if let Some(slope) = fitted_slope(&far) {
                let expected = scale * beam.divergence();
                let _ = writeln!(
                    out,
                    "slope over [2 z_R, 3 z_R]: {} vs asymptote {} (relative deviation {})",
                    slope,
                    expected,
                    short((slope - expected).abs() / expected)
                );
            }
            for &z in &config.planes {
                let Ok(profile) = read_table(&dir.join(profile_file_name(z)), 3) else {
                    continue;
                };
                let oracle_peak = paraxial_amplitude(&beam, 0.0, z).powi(2);
                let mut stats = Stats::default();
                let mut waist = None;
                for p in &profile {
                    let expected = paraxial_amplitude(&beam, p[1], z).powi(2);
                    if expected > 1e-3 * oracle_peak {
                        stats.push((p[2] - expected).abs() / expected);
                    }
                    if p[0] as usize == tracked {
                        waist = Some(p[1]);
                    }
                }
                let _ = write!(out, "plane z = {z}: profile relative deviation {}", stats.line());
                if let Some(x) = waist {
                    let expected = scale * waist_line(&beam, z);
                    let _ = write!(out, "; waist line deviation {}", short((x - expected).abs() / expected));
                }
                out.push('\n');
            }
        }
        LaunchShape::Slits(slits) => {
            if let ([a, b], Some(&z)) = (slits.as_slice(), config.planes.last()) {
                let separation = (b.center - a.center).abs();
                let profile = read_table(&dir.join(profile_file_name(z)), 3)?;
                let points: Vec<(f64, f64)> = profile.iter().map(|p| (p[1], p[2])).collect();
                let maxima = intensity_maxima(&points, 1e-3);
                let spacing = two_slit_fringe_positions(separation, lambda0, z, 1);
                for m in -2..=2 {
                    let expected = two_slit_fringe_positions(separation, lambda0, z, m);
                    let nearest = maxima
                        .iter()
                        .copied()
                        .min_by(|p, q| (p - expected).abs().total_cmp(&(q - expected).abs()));
                    match nearest {
                        Some(x) => {
                            let _ = writeln!(
                                out,
                                "fringe m = {m} at z = {z}: found {x}, expected {expected} (deviation {} of the fringe spacing)",
                                short((x - expected).abs() / spacing)
                            );
                        }
                        None => {
                            let _ = writeln!(out, "fringe m = {m} at z = {z}: no maximum found");
                        }
                    }
                }
            }
        }
    }

    let report_path = dir.join(REPORT_FILE);
    let mut report = fs::read_to_string(&report_path).unwrap_or_default();
    report.push_str(&out);
    fs::write(&report_path, report).map_err(|e| format!("cannot write {}: {e}", report_path.display()))
}
