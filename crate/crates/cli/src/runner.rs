//! Experiment orchestration. Every run writes its artifacts plus a
//! `manifest.toml` naming each of them, the resolved configuration and its
//! hash, the code version and the wall time.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use strip_boussinesq::diagnostics::{
    decay_ladder, energy_report_with, fit_ladder, fit_rate, ladder_curve, log_times, vorticity_l2_entry, DecayCurve,
    LadderEntry, LadderResult,
};
use strip_boussinesq::frequency::{
    classify_lattice, continuum_linear_decay, kernel_decay_integral, nu_star, nu_star_grid_search, nu_star_sq,
    verify_symbol_bounds, BoundOutcome, BOUND_K_MAX, BOUND_XI_MAX,
};
use strip_boussinesq::io;
use strip_boussinesq::ode::{dopri5, OdeOptions};
use strip_boussinesq::propagator::{
    mode_symbol, pair_exponential, propagate_linear_pair, propagator_pair, propagator_pair_dt, LinearPairPropagator,
    Region,
};
use strip_boussinesq::solver::{make_initial_data, nonlinear_term, run_trajectory, InitialDataReport};
use strip_boussinesq::spectral::{
    curl, divergence, neg_laplacian, poisson_inverse, to_physical, to_spectral, velocity_from_vorticity,
};
use strip_boussinesq::{FlowState, Parity, SpectralField, StripGrid};
use thiserror::Error;

use crate::config::{to_toml, Experiment, ExperimentConfig, LoadedConfig};

/// Exponent tolerance for fits of the continuum linear curves.
pub const CONTINUUM_TOLERANCE: f64 = 0.08;
/// Exponent tolerance for fits of runs on the truncated periodic grid.
pub const TRUNCATED_TOLERANCE: f64 = 0.15;
/// Smallest acceptable coefficient of determination of a rate fit.
pub const MIN_R_SQUARED: f64 = 0.98;

pub const MANIFEST: &str = "manifest.toml";
pub const SUMMARY: &str = "summary.txt";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

impl From<strip_boussinesq::Error> for RunError {
    fn from(e: strip_boussinesq::Error) -> Self {
        RunError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Numerical(format!("i/o: {e}"))
    }
}

/// What a finished run left behind.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    /// File names relative to `output_dir`, manifest last.
    pub files: Vec<String>,
    /// `key = value` lines, also written to `summary.txt`.
    pub summary: Vec<(String, String)>,
}

impl RunOutcome {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Artifacts of one experiment, collected before the manifest is written.
#[derive(Default)]
struct Artifacts {
    files: Vec<String>,
    summary: Vec<(String, String)>,
    honesty_window: Option<(f64, f64)>,
}

impl Artifacts {
    fn file(&mut self, dir: &Path, name: impl Into<String>) -> PathBuf {
        let name = name.into();
        let path = dir.join(&name);
        self.files.push(name);
        path
    }

    fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    fn put_f(&mut self, key: impl Into<String>, value: f64) {
        self.put(key, format!("{value:e}"));
    }
}

/// Hex SHA-256 of the canonical serialization of a configuration.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(to_toml(config).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn prepare_dir(dir: &Path) -> Result<(), RunError> {
    let fail = |e: std::io::Error| RunError::Validation(format!("output_dir: cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)?;
    Ok(())
}

/// Runs the configured experiment. On numerical failure the manifest is
/// still written, listing whatever was produced, before the error returns.
pub fn run(loaded: &LoadedConfig) -> Result<RunOutcome, RunError> {
    let config = &loaded.config;
    config
        .validate()
        .map_err(|errs| RunError::Validation(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")))?;
    let dir = config.output_dir.clone();
    prepare_dir(&dir)?;
    let start = Instant::now();
    let mut art = Artifacts::default();
    let result = match config.experiment {
        Experiment::LinearDecayContinuum => linear_decay_continuum(config, &dir, &mut art),
        Experiment::LinearDecayTruncated => linear_decay_truncated(config, &dir, &mut art),
        Experiment::NonlinearDecay => nonlinear_decay(config, &dir, &mut art),
        Experiment::SymbolBounds => symbol_bounds(config, &dir, &mut art),
        Experiment::KernelIntegral => kernel_integral(config, &dir, &mut art),
        Experiment::NuStar => nu_star_experiment(config, &dir, &mut art),
        Experiment::EnergyCheck => energy_check(config, &dir, &mut art),
        Experiment::OracleSuite => oracle_suite(config, &dir, &mut art),
    };
    let wall = start.elapsed().as_secs_f64();
    let status = match &result {
        Ok(()) => "ok".to_string(),
        Err(e) => e.to_string(),
    };
    let summary_path = art.file(&dir, SUMMARY);
    let mut text = String::new();
    for (k, v) in &art.summary {
        let _ = writeln!(text, "{k} = {v}");
    }
    fs::write(summary_path, text)?;
    write_manifest(loaded, &dir, &art, wall, &status)?;
    art.files.push(MANIFEST.to_string());
    result?;
    Ok(RunOutcome {
        output_dir: dir,
        files: art.files,
        summary: art.summary,
    })
}

fn write_manifest(loaded: &LoadedConfig, dir: &Path, art: &Artifacts, wall: f64, status: &str) -> Result<(), RunError> {
    use toml::Value;
    let config = &loaded.config;
    let mut run = toml::Table::new();
    run.insert("experiment".into(), Value::String(config.experiment.name().into()));
    run.insert("status".into(), Value::String(status.into()));
    run.insert("code_version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    run.insert(
        "config_hash".into(),
        Value::String(format!("sha256:{}", config_hash(config))),
    );
    run.insert("wall_time_seconds".into(), Value::Float(wall));
    if let Some((a, b)) = art.honesty_window {
        run.insert(
            "honesty_window".into(),
            Value::Array(vec![Value::Float(a), Value::Float(b)]),
        );
    }
    let mut outputs: Vec<Value> = art.files.iter().map(|f| Value::String(f.clone())).collect();
    outputs.push(Value::String(MANIFEST.into()));
    run.insert("outputs".into(), Value::Array(outputs));
    run.insert(
        "defaulted_keys".into(),
        Value::Array(loaded.defaulted.iter().map(|k| Value::String(k.clone())).collect()),
    );
    let overrides: toml::Table = loaded
        .overrides
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    run.insert("overrides".into(), Value::Table(overrides));

    let mut doc = toml::Table::new();
    doc.insert("run".into(), Value::Table(run));
    doc.insert(
        "config".into(),
        Value::Table(to_toml(config).parse().expect("configuration round trips")),
    );
    fs::write(dir.join(MANIFEST), toml::to_string(&doc).expect("manifest serializes"))?;
    Ok(())
}

fn ladder_entries() -> Vec<LadderEntry> {
    let mut e = decay_ladder();
    e.push(vorticity_l2_entry());
    e
}

fn record_fits(art: &mut Artifacts, results: &[LadderResult], tolerance: f64) {
    let mut all = true;
    for r in results {
        let ok = r.deviation() <= tolerance && r.fit.r_squared >= MIN_R_SQUARED;
        all &= ok;
        art.put(
            format!("fit.{}", r.curve.label),
            format!(
                "exponent={:.4} expected={} r2={:.4} {}",
                r.fit.exponent,
                r.entry.expected,
                r.fit.r_squared,
                if ok { "within" } else { "outside" }
            ),
        );
    }
    art.put_f("tolerance", tolerance);
    art.put("ladder_within_tolerance", all);
}

fn write_ladder(dir: &Path, art: &mut Artifacts, results: &[LadderResult]) -> Result<(), RunError> {
    let curves: Vec<DecayCurve> = results.iter().map(|r| r.curve.clone()).collect();
    io::write_curves_long(&art.file(dir, "curves.csv"), &curves)?;
    io::write_fits(&art.file(dir, "fits.txt"), results)?;
    Ok(())
}

fn linear_decay_continuum(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let entries = ladder_entries();
    let ids: Vec<_> = entries.iter().map(|e| (e.component, e.norm)).collect();
    let window = (cfg.linear.t_min, cfg.linear.t_max);
    let times = log_times(window.0, window.1, cfg.linear.samples);
    let curves = continuum_linear_decay(
        &cfg.profile_scaled(1.0),
        cfg.grid.nu,
        &ids,
        &times,
        &cfg.quadrature_spec(),
    )?;
    let results = fit_ladder(&entries, curves, window)?;
    write_ladder(dir, art, &results)?;
    record_fits(art, &results, CONTINUUM_TOLERANCE);
    Ok(())
}

fn report_initial(art: &mut Artifacts, r: &InitialDataReport) {
    art.put_f("initial.theta_w81", r.theta_w81);
    art.put_f("initial.theta_w51", r.theta_w51);
    art.put_f("initial.omega_w51", r.omega_w51);
    art.put_f("initial.theta_l2", r.theta_l2);
    art.put_f("initial.omega_l2", r.omega_l2);
    art.put_f("initial.theta_h4", r.theta_h4);
}

fn fit_trajectory(traj: &[FlowState], window: (f64, f64)) -> Result<Vec<LadderResult>, RunError> {
    let entries = ladder_entries();
    let curves = entries
        .iter()
        .map(|e| ladder_curve(traj, e))
        .collect::<strip_boussinesq::Result<Vec<_>>>()?;
    Ok(fit_ladder(&entries, curves, window)?)
}

fn linear_decay_truncated(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let grid = cfg.strip_grid()?;
    let window = cfg.truncated_window();
    art.honesty_window = Some((window.0, grid.honesty_horizon()));
    let (s0, report) = make_initial_data(&cfg.profile_scaled(1.0), grid)?;
    report_initial(art, &report);
    let traj = log_times(window.0, window.1, cfg.truncated.samples)
        .into_iter()
        .map(|t| {
            let mut s = propagate_linear_pair(&s0.omega, &s0.theta, t)?;
            s.t = t;
            Ok(s)
        })
        .collect::<strip_boussinesq::Result<Vec<_>>>()?;
    let results = fit_trajectory(&traj, window)?;
    write_ladder(dir, art, &results)?;
    record_fits(art, &results, TRUNCATED_TOLERANCE);
    Ok(())
}

fn nonlinear_decay(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let grid = cfg.strip_grid()?;
    let window = cfg.nonlinear_window();
    art.honesty_window = Some((cfg.nonlinear.t_min, grid.honesty_horizon()));
    let (s0, report) = make_initial_data(&cfg.profile_scaled(cfg.nonlinear.epsilon), grid)?;
    report_initial(art, &report);
    art.put_f("epsilon", cfg.nonlinear.epsilon);
    for p in io::write_snapshot(dir, "initial", &s0)? {
        art.files.push(file_name(&p));
    }
    let mut samples = vec![0.0];
    samples.extend(log_times(window.0, window.1, cfg.nonlinear.samples));
    let traj = run_trajectory(&s0, &cfg.stepper_config(), window.1, &samples)?;
    let last = traj.snapshots.last().cloned().unwrap_or(s0.clone());
    for p in io::write_snapshot(dir, "final", &last)? {
        art.files.push(file_name(&p));
    }
    art.put_f("t_reached", last.t);
    if let Some(e) = traj.failure {
        return Err(e.into());
    }
    let linear = propagate_linear_pair(&s0.omega, &s0.theta, last.t)?;
    art.put_f("linear_deviation_l2", last.l2_distance(&linear)?);
    let results = fit_trajectory(&traj.snapshots[1..], window)?;
    write_ladder(dir, art, &results)?;
    record_fits(art, &results, TRUNCATED_TOLERANCE);
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name().expect("file path").to_string_lossy().into_owned()
}

fn symbol_bounds(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let mut table =
        String::from("nu,region,status,samples,c_l1,c_l2,c_dl1,c_dl2,c2_l1,c2_l2,c2_dl1,c2_dl2,max_relative_change\n");
    let mut all = true;
    for (i, &nu) in cfg.bounds.nus.iter().enumerate() {
        let lattice = classify_lattice(nu, BOUND_XI_MAX, cfg.bounds.lattice_points, BOUND_K_MAX);
        io::write_regions(&art.file(dir, format!("regions_{i}.csv")), &lattice)?;
        for region in Region::ALL {
            match verify_symbol_bounds(nu, region, cfg.bounds.samples, cfg.seed)? {
                BoundOutcome::Empty { .. } => {
                    let present = lattice.iter().any(|l| l.2 == region);
                    all &= !present;
                    let _ = writeln!(table, "{nu:e},{},empty,0{}", region.name(), ",".repeat(9));
                    art.put(
                        format!("bounds.{nu}.{}", region.name()),
                        if present { "FAILED: sampled" } else { "empty" },
                    );
                }
                BoundOutcome::Checked(r) => {
                    let ok = r.passed();
                    all &= ok;
                    let c: Vec<String> = r
                        .constants
                        .iter()
                        .chain(&r.constants_doubled)
                        .map(|v| format!("{v:e}"))
                        .collect();
                    let _ = writeln!(
                        table,
                        "{nu:e},{},{},{},{},{:e}",
                        region.name(),
                        if ok { "passed" } else { "failed" },
                        r.samples,
                        c.join(","),
                        r.max_relative_change()
                    );
                    art.put(
                        format!("bounds.{nu}.{}", region.name()),
                        format!(
                            "{} change={:.3e}",
                            if ok { "passed" } else { "FAILED" },
                            r.max_relative_change()
                        ),
                    );
                }
            }
        }
    }
    fs::write(art.file(dir, "bounds.csv"), table)?;
    art.put("all_bounds_hold", all);
    Ok(())
}

fn kernel_integral(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let k = &cfg.kernel;
    let times = if k.t_min > 0.0 {
        log_times(k.t_min, k.t_max, k.samples)
    } else {
        (0..k.samples)
            .map(|i| k.t_max * i as f64 / (k.samples - 1) as f64)
            .collect()
    };
    let values = times
        .iter()
        .map(|&t| kernel_decay_integral(t))
        .collect::<strip_boussinesq::Result<Vec<_>>>()?;
    let curve = DecayCurve::new("kernel", times.clone(), values.clone())?;
    io::write_curve(&art.file(dir, "kernel.csv"), &curve)?;
    let fit_window = (if k.t_min > 0.0 { k.t_min } else { times[1] }, k.t_max);
    let fit = fit_rate(&curve, fit_window)?;
    let scaled: Vec<f64> = times
        .iter()
        .zip(&values)
        .filter(|(t, _)| **t >= fit_window.0)
        .map(|(t, v)| v * t.sqrt())
        .collect();
    let ratio = scaled.iter().cloned().fold(0.0, f64::max) / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    fs::write(art.file(dir, "kernel_fit.txt"), format!("kernel: {}\n", fit.to_kv()))?;
    art.put_f("slope", fit.exponent);
    art.put_f("r2", fit.r_squared);
    art.put_f("sqrt_t_ratio", ratio);
    Ok(())
}

fn nu_star_experiment(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let s = &cfg.nu_star;
    let search = nu_star_grid_search(s.xi_max, 1, s.k_max, s.points);
    let mut text = String::new();
    let _ = writeln!(text, "nu_star = {:e}", nu_star());
    let _ = writeln!(text, "nu_star_sq = {:e}", nu_star_sq());
    let _ = writeln!(text, "search_sup = {:e}", search.sup_ratio);
    let _ = writeln!(text, "search_delta = {:e}", search.delta);
    let _ = writeln!(text, "argmax_xi = {:e}", search.argmax_xi);
    let _ = writeln!(text, "argmax_k = {}", search.argmax_k);
    let _ = writeln!(text, "points = {}", search.points);
    fs::write(art.file(dir, "nu_star.txt"), text)?;
    art.put_f("nu_star", nu_star());
    art.put_f("nu_star_sq", nu_star_sq());
    art.put_f("search_delta", search.delta);
    art.put_f("argmax_xi", search.argmax_xi);
    art.put("argmax_k", search.argmax_k);
    Ok(())
}

fn energy_check(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let grid = cfg.strip_grid()?;
    let e = &cfg.energy;
    let n = e.snapshots;
    let h = e.span / n as f64;
    let (s0, _) = make_initial_data(&cfg.profile_scaled(1.0), grid)?;
    let traj: Vec<FlowState> = if e.mode == "linear" {
        let mut start = propagate_linear_pair(&s0.omega, &s0.theta, e.t_start)?;
        start.t = e.t_start;
        let step = LinearPairPropagator::new(grid, h)?;
        let mut out = vec![start];
        for i in 0..n {
            let mut s = step.apply(&out[i])?;
            s.t = e.t_start + (i + 1) as f64 * h;
            out.push(s);
        }
        out
    } else {
        let stepper = cfg.stepper_config();
        let ratio = h / stepper.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio || ratio < 0.5 {
            return Err(RunError::Validation(format!(
                "energy.snapshots: snapshot spacing {h} is not a multiple of stepper.dt = {}",
                stepper.dt
            )));
        }
        let samples: Vec<f64> = (0..=n).map(|i| e.t_start + i as f64 * h).collect();
        let traj = run_trajectory(&s0, &stepper, e.t_start + e.span, &samples)?;
        if let Some(err) = traj.failure {
            return Err(err.into());
        }
        traj.snapshots
    };
    let r = energy_report_with(&traj, grid.nu(), cfg.stepper.dealias_fraction)?;
    let mut table = String::from("t,energy,dissipation_rate,flux,b3\n");
    for i in 0..r.times.len() {
        let _ = writeln!(
            table,
            "{:e},{:e},{:e},{:e},{:e}",
            r.times[i], r.energy[i], r.dissipation_rate[i], r.flux[i], r.b3[i]
        );
    }
    fs::write(art.file(dir, "energy.csv"), table)?;
    art.put("mode", &e.mode);
    art.put_f("dissipation_integral", r.dissipation_integral);
    art.put_f("flux_integral", r.flux_integral);
    art.put_f("residual", r.residual);
    art.put_f("relative_residual", r.relative_residual);
    art.put_f("max_b3_relative", r.max_b3_relative);
    Ok(())
}

/// One self-check of the oracle suite.
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

fn random_field(grid: StripGrid, parity: Parity, band: f64, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut f = SpectralField::from_fn(grid, parity, |_, _, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    f.apply_band_limit(band);
    f.enforce_hermitian();
    f
}

/// Largest relative disagreement between the closed-form propagators and an
/// adaptive integration of the per-mode system, over `t` in {0.1, 1, 10}.
fn mode_oracle(xi: f64, k: usize, nu: f64) -> Result<f64, RunError> {
    use std::f64::consts::PI;
    const TIMES: [f64; 3] = [0.1, 1.0, 10.0];
    let p = xi * xi + PI * PI * (k * k) as f64;
    let nup = nu * p;
    let b = xi * xi / p;
    let disc = nup * nup - 4.0 * b;
    // Shift by the slowest decay rate so nothing under- or overflows.
    let c = if disc > 0.0 {
        b / (0.5 * (nup + disc.sqrt()))
    } else {
        0.5 * nup
    };
    let rhs = |_t: f64, y: &[f64], d: &mut [f64]| {
        for s in 0..2 {
            d[2 * s] = c * y[2 * s] + y[2 * s + 1];
            d[2 * s + 1] = -b * y[2 * s] + (c - nup) * y[2 * s + 1];
        }
        for col in 0..2 {
            let o = 4 + 4 * col;
            let w = Complex64::new(y[o], y[o + 1]);
            let q = Complex64::new(y[o + 2], y[o + 3]);
            let dw = (c - nup) * w + Complex64::new(0.0, xi) * q;
            let dq = Complex64::new(0.0, xi / p) * w + c * q;
            d[o..o + 4].copy_from_slice(&[dw.re, dw.im, dq.re, dq.im]);
        }
    };
    let mut y0 = [0.0; 12];
    y0[0] = 1.0;
    y0[1] = -0.5 * nup;
    y0[3] = 1.0;
    y0[4] = 1.0;
    y0[10] = 1.0;
    let opts = OdeOptions {
        rtol: 1e-13,
        atol: 1e-40,
        ..OdeOptions::default()
    };
    let out = dopri5(rhs, 0.0, &y0, &TIMES, opts)?;
    let sym = mode_symbol(xi, k, nu)?;
    let rel = |a: Complex64, b: Complex64| {
        if a.norm().max(b.norm()) < 1e-280 {
            0.0
        } else {
            (a - b).norm() / b.norm()
        }
    };
    let mut worst = 0.0f64;
    for (y, &t) in out.iter().zip(&TIMES) {
        let s = (-c * t).exp();
        let v = propagator_pair(&sym, t);
        let d = propagator_pair_dt(&sym, t);
        let got = [v.l1_hat, d.l1_hat, v.l2_hat, d.l2_hat];
        for q in 0..4 {
            worst = worst.max(rel(Complex64::new(got[q], 0.0), Complex64::new(y[q] * s, 0.0)));
        }
        let m = pair_exponential(&sym, t);
        let reference = [
            Complex64::new(y[4], y[5]),
            Complex64::new(y[8], y[9]),
            Complex64::new(y[6], y[7]),
            Complex64::new(y[10], y[11]),
        ];
        for q in 0..4 {
            worst = worst.max(rel(m[q], reference[q] * s));
        }
    }
    Ok(worst)
}

fn oracle_suite(cfg: &ExperimentConfig, dir: &Path, art: &mut Artifacts) -> Result<(), RunError> {
    let grid = cfg.strip_grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let mut round = 0.0f64;
    let mut parseval = 0.0f64;
    for parity in [Parity::Odd, Parity::Even] {
        let f = random_field(grid, parity, 1.0, &mut rng);
        let phys = to_physical(&f);
        round = round.max(to_spectral(&phys)?.sub(&f)?.max_abs() / f.max_abs());
        let q = phys.quadrature(|v| v * v);
        parseval = parseval.max((q - f.l2_norm_sq()).abs() / q);
    }
    checks.push(Check {
        name: "transform_round_trip",
        value: round,
        tolerance: 1e-12,
    });
    checks.push(Check {
        name: "parseval",
        value: parseval,
        tolerance: 1e-10,
    });

    let w = random_field(grid, Parity::Odd, 1.0, &mut rng);
    let scale = w.max_abs();
    let poisson = neg_laplacian(&poisson_inverse(&w)?).sub(&w)?.max_abs() / scale;
    let (u1, u2) = velocity_from_vorticity(&w)?;
    let div = divergence(&u1, &u2)?.max_abs() / scale;
    let rot = curl(&u1, &u2)?.sub(&w)?.max_abs() / scale;
    checks.push(Check {
        name: "poisson_residual",
        value: poisson,
        tolerance: 1e-13,
    });
    checks.push(Check {
        name: "divergence",
        value: div,
        tolerance: 1e-13,
    });
    checks.push(Check {
        name: "curl_reconstruction",
        value: rot,
        tolerance: 1e-13,
    });

    let band = cfg.stepper.dealias_fraction;
    let state = FlowState::new(
        0.0,
        random_field(grid, Parity::Odd, band, &mut rng),
        random_field(grid, Parity::Odd, band, &mut rng),
    )?;
    let (nw, nq) = nonlinear_term(&state, band)?;
    let skew_w = nw.inner(&state.omega)?.abs() / (nw.l2_norm_sq() * state.omega.l2_norm_sq()).sqrt();
    let skew_q = nq.inner(&state.theta)?.abs() / (nq.l2_norm_sq() * state.theta.l2_norm_sq()).sqrt();
    checks.push(Check {
        name: "transport_skew_symmetry",
        value: skew_w.max(skew_q),
        tolerance: 1e-10,
    });
    let traj: Vec<FlowState> = (0..3)
        .map(|i| FlowState {
            t: i as f64,
            ..state.clone()
        })
        .collect();
    let energy = energy_report_with(&traj, grid.nu(), band)?;
    checks.push(Check {
        name: "coupling_cancellation",
        value: energy.max_b3_relative,
        tolerance: 1e-10,
    });

    let nus = [0.01, nu_star(), 1.0];
    let mut worst = 0.0f64;
    for _ in 0..cfg.oracle.modes {
        let xi = rng.gen_range(-50.0..50.0);
        let k = rng.gen_range(1..=32);
        let nu = nus[rng.gen_range(0..3)];
        worst = worst.max(mode_oracle(xi, k, nu)?);
    }
    checks.push(Check {
        name: "propagator_ode_oracle",
        value: worst,
        tolerance: 1e-8,
    });

    let mut table = String::from("check,value,tolerance,passed\n");
    let mut failed = Vec::new();
    for c in &checks {
        let ok = c.value <= c.tolerance;
        if !ok {
            failed.push(c.name);
        }
        let _ = writeln!(table, "{},{:e},{:e},{}", c.name, c.value, c.tolerance, ok);
        art.put(
            format!("check.{}", c.name),
            format!(
                "{:.3e} (tolerance {:e}) {}",
                c.value,
                c.tolerance,
                if ok { "passed" } else { "FAILED" }
            ),
        );
    }
    fs::write(art.file(dir, "oracle.csv"), table)?;
    art.put("all_checks_passed", failed.is_empty());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(RunError::Numerical(format!(
            "oracle checks failed: {}",
            failed.join(", ")
        )))
    }
}
