//! Experiment configuration: a strict TOML document.
//!
//! Unknown keys are errors at every level. Absent keys take the defaults
//! below, and the fully resolved document is what gets hashed and echoed
//! into the run manifest.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use strip_boussinesq::diagnostics::MIN_WINDOW_RATIO;
use strip_boussinesq::frequency::{QuadratureSpec, XiRule};
use strip_boussinesq::solver::{Scheme, StepperConfig};
use strip_boussinesq::{Component, Profile, ProfileTerm, StripGrid};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    LinearDecayContinuum,
    LinearDecayTruncated,
    NonlinearDecay,
    SymbolBounds,
    KernelIntegral,
    NuStar,
    EnergyCheck,
    OracleSuite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::LinearDecayContinuum,
        Experiment::LinearDecayTruncated,
        Experiment::NonlinearDecay,
        Experiment::SymbolBounds,
        Experiment::KernelIntegral,
        Experiment::NuStar,
        Experiment::EnergyCheck,
        Experiment::OracleSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::LinearDecayContinuum => "linear-decay-continuum",
            Experiment::LinearDecayTruncated => "linear-decay-truncated",
            Experiment::NonlinearDecay => "nonlinear-decay",
            Experiment::SymbolBounds => "symbol-bounds",
            Experiment::KernelIntegral => "kernel-integral",
            Experiment::NuStar => "nu-star",
            Experiment::EnergyCheck => "energy-check",
            Experiment::OracleSuite => "oracle-suite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub lx: f64,
    pub nx: usize,
    pub ny: usize,
    pub nu: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = StripGrid::desk_default();
        GridConfig {
            lx: g.lx(),
            nx: g.nx(),
            ny: g.ny(),
            nu: g.nu(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepperSection {
    pub dt: f64,
    pub cfl_safety: f64,
    pub dealias_fraction: f64,
    pub scheme: String,
}

impl Default for StepperSection {
    fn default() -> Self {
        let s = StepperConfig::default();
        StepperSection {
            dt: s.dt,
            cfl_safety: s.cfl_safety,
            dealias_fraction: s.dealias_fraction,
            scheme: s.scheme.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub component: String,
    pub k: usize,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    pub band_fraction: f64,
    pub terms: Vec<TermConfig>,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        let p = Profile::gaussian_theta(1.0);
        ProfileConfig {
            band_fraction: p.band_fraction,
            terms: p
                .terms
                .iter()
                .map(|t| TermConfig {
                    component: t.component.name().to_string(),
                    k: t.k,
                    width: t.width,
                    amplitude: t.amplitude,
                })
                .collect(),
        }
    }
}

/// Time sampling and fit window shared by the decay experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearSection {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub xi_cutoff: f64,
    pub xi_points: usize,
    pub k_max: usize,
    pub rule: String,
}

impl Default for LinearSection {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        LinearSection {
            t_min: 10.0,
            t_max: 1e4,
            samples: 61,
            xi_cutoff: q.xi_cutoff,
            xi_points: q.xi_points,
            k_max: q.k_max,
            rule: q.rule.name().to_string(),
        }
    }
}

/// Time sampling of the linear run on the truncated grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncatedSection {
    pub t_min: f64,
    /// Zero selects the truncation-honesty horizon of the grid.
    pub t_max: f64,
    pub samples: usize,
}

impl Default for TruncatedSection {
    fn default() -> Self {
        TruncatedSection {
            t_min: 10.0,
            t_max: 0.0,
            samples: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearSection {
    /// Factor applied to every profile amplitude.
    pub epsilon: f64,
    pub t_min: f64,
    /// Zero selects the truncation-honesty horizon of the grid.
    pub t_max: f64,
    pub samples: usize,
}

impl Default for NonlinearSection {
    fn default() -> Self {
        NonlinearSection {
            epsilon: 1e-4,
            t_min: 10.0,
            t_max: 0.0,
            samples: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub nus: Vec<f64>,
    pub samples: usize,
    pub lattice_points: usize,
}

impl Default for BoundsSection {
    fn default() -> Self {
        BoundsSection {
            nus: vec![0.01, 1.0],
            samples: 2000,
            lattice_points: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection {
            t_min: 1e2,
            t_max: 1e6,
            samples: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NuStarSection {
    pub xi_max: f64,
    pub k_max: usize,
    pub points: usize,
}

impl Default for NuStarSection {
    fn default() -> Self {
        NuStarSection {
            xi_max: 50.0,
            k_max: 50,
            points: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergySection {
    /// `linear` uses the exact propagator, `nonlinear` the split-step solver.
    pub mode: String,
    pub t_start: f64,
    pub span: f64,
    pub snapshots: usize,
}

impl Default for EnergySection {
    fn default() -> Self {
        EnergySection {
            mode: "linear".to_string(),
            t_start: 2.0,
            span: 2.0,
            snapshots: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub modes: usize,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection { modes: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub stepper: StepperSection,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub linear: LinearSection,
    #[serde(default)]
    pub truncated: TruncatedSection,
    #[serde(default)]
    pub nonlinear: NonlinearSection,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub nu_star: NuStarSection,
    #[serde(default)]
    pub energy: EnergySection,
    #[serde(default)]
    pub oracle: OracleSection,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A validation failure tied to one dotted key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {message}")]
    Type { line: usize, message: String },
    #[error("override '{text}': {message}")]
    Override { text: String, message: String },
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
}

fn line_of(text: &str, err: &toml::de::Error) -> usize {
    err.span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(0)
}

fn classify(text: &str, err: toml::de::Error, syntax: bool) -> ConfigError {
    let line = line_of(text, &err);
    let message = err.message().to_string();
    if syntax {
        return ConfigError::Syntax { line, message };
    }
    if let Some(rest) = message.strip_prefix("unknown field `") {
        let key = rest.split('`').next().unwrap_or_default().to_string();
        return ConfigError::UnknownKey { line, key };
    }
    ConfigError::Type { line, message }
}

/// Parses a document; absent keys take defaults. Performs no validation
/// beyond structure and types.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    text.parse::<toml::Table>().map_err(|e| classify(text, e, true))?;
    toml::from_str(text).map_err(|e| classify(text, e, false))
}

/// Serializes a configuration to a document that parses back to an equal
/// value.
pub fn to_toml(config: &ExperimentConfig) -> String {
    toml::to_string(config).expect("configuration is always representable")
}

/// A configuration together with what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    /// Dotted keys that were absent and took their default.
    pub defaulted: Vec<String>,
    /// `key=value` overrides applied on top of the document, in order.
    pub overrides: Vec<(String, String)>,
}

fn leaf_keys(table: &toml::Table, prefix: &str, out: &mut BTreeSet<String>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            toml::Value::Table(t) => leaf_keys(t, &key, out),
            _ => {
                out.insert(key);
            }
        }
    }
}

fn override_value(text: &str) -> toml::Value {
    // Anything that is not a TOML literal is taken as a bare string.
    let doc = format!("v = {text}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(text.to_string()),
    }
}

fn apply_override(table: &mut toml::Table, key: &str, value: &str) -> Result<(), ConfigError> {
    let err = |message: &str| ConfigError::Override {
        text: format!("{key}={value}"),
        message: message.to_string(),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(err("empty key segment"));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(err(&format!("'{p}' is not a section"))),
        };
    }
    cur.insert(parts[parts.len() - 1].to_string(), override_value(value));
    Ok(())
}

/// Parses `text`, applies dotted `key=value` overrides (which win over the
/// document), fills defaults and validates.
pub fn load(text: &str, overrides: &[(String, String)]) -> Result<LoadedConfig, ConfigError> {
    let mut table: toml::Table = text.parse().map_err(|e| classify(text, e, true))?;
    for (k, v) in overrides {
        apply_override(&mut table, k, v)?;
    }
    // Without overrides, deserialize the original text so that reported line
    // numbers match what the user wrote.
    let source = if overrides.is_empty() {
        text.to_string()
    } else {
        toml::to_string(&table).expect("table serializes")
    };
    let config: ExperimentConfig = toml::from_str(&source).map_err(|e| classify(&source, e, false))?;
    let mut given = BTreeSet::new();
    leaf_keys(&table, "", &mut given);
    let full: toml::Table = to_toml(&config).parse().expect("round trip");
    let mut all = BTreeSet::new();
    leaf_keys(&full, "", &mut all);
    let defaulted = all
        .into_iter()
        .filter(|k| !given.iter().any(|g| g == k || k.starts_with(&format!("{g}."))))
        .collect();
    config.validate().map_err(ConfigError::Invalid)?;
    Ok(LoadedConfig {
        config,
        defaulted,
        overrides: overrides.to_vec(),
    })
}

fn positive(errors: &mut Vec<FieldError>, field: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errors.push(FieldError {
            field: field.to_string(),
            message: format!("must be positive and finite, got {v}"),
        });
    }
}

fn at_least(errors: &mut Vec<FieldError>, field: &str, v: usize, min: usize) {
    if v < min {
        errors.push(FieldError {
            field: field.to_string(),
            message: format!("must be at least {min}, got {v}"),
        });
    }
}

fn push(errors: &mut Vec<FieldError>, field: &str, message: String) {
    errors.push(FieldError {
        field: field.to_string(),
        message,
    });
}

impl ExperimentConfig {
    /// Defaults for everything but the experiment.
    pub fn minimal(experiment: Experiment) -> Self {
        parse_config(&format!("experiment = \"{experiment}\"")).expect("defaults parse")
    }

    /// Checks every numeric parameter against the preconditions of the
    /// computation it feeds; all failures are reported, not just the first.
    pub fn validate(&self) -> Result<(), Vec<FieldError>> {
        let mut e = Vec::new();
        let g = &self.grid;
        positive(&mut e, "grid.lx", g.lx);
        positive(&mut e, "grid.nu", g.nu);
        if g.nx < 4 || !g.nx.is_multiple_of(2) {
            push(&mut e, "grid.nx", format!("must be even and at least 4, got {}", g.nx));
        }
        at_least(&mut e, "grid.ny", g.ny, 2);

        let s = &self.stepper;
        positive(&mut e, "stepper.dt", s.dt);
        if !(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0) {
            push(
                &mut e,
                "stepper.cfl_safety",
                format!("must lie in (0, 1], got {}", s.cfl_safety),
            );
        }
        if !(s.dealias_fraction > 0.0 && s.dealias_fraction <= 1.0) {
            push(
                &mut e,
                "stepper.dealias_fraction",
                format!("must lie in (0, 1], got {}", s.dealias_fraction),
            );
        }
        if Scheme::parse(&s.scheme).is_none() {
            push(
                &mut e,
                "stepper.scheme",
                format!("unknown scheme '{}', expected strang-rk2 or strang-rk4", s.scheme),
            );
        }

        let p = &self.profile;
        if !(p.band_fraction > 0.0 && p.band_fraction <= 1.0) {
            push(
                &mut e,
                "profile.band_fraction",
                format!("must lie in (0, 1], got {}", p.band_fraction),
            );
        }
        if p.terms.is_empty() {
            push(&mut e, "profile.terms", "at least one term is required".to_string());
        }
        for (i, t) in p.terms.iter().enumerate() {
            let f = |name: &str| format!("profile.terms[{i}].{name}");
            if Component::parse(&t.component).is_none() {
                push(
                    &mut e,
                    &f("component"),
                    format!("expected omega or theta, got '{}'", t.component),
                );
            }
            at_least(&mut e, &f("k"), t.k, 1);
            positive(&mut e, &f("width"), t.width);
            if !t.amplitude.is_finite() {
                push(&mut e, &f("amplitude"), format!("must be finite, got {}", t.amplitude));
            }
        }

        let l = &self.linear;
        positive(&mut e, "linear.t_min", l.t_min);
        if !(l.t_max > l.t_min && l.t_max.is_finite()) {
            push(
                &mut e,
                "linear.t_max",
                format!("must exceed linear.t_min, got {}", l.t_max),
            );
        }
        at_least(&mut e, "linear.samples", l.samples, 8);
        positive(&mut e, "linear.xi_cutoff", l.xi_cutoff);
        at_least(&mut e, "linear.xi_points", l.xi_points, 16);
        at_least(&mut e, "linear.k_max", l.k_max, 1);
        if let Some(kmax) = p.terms.iter().map(|t| t.k).max() {
            if l.k_max < kmax {
                push(
                    &mut e,
                    "linear.k_max",
                    format!("must cover the profile modes up to k = {kmax}, got {}", l.k_max),
                );
            }
        }
        if XiRule::parse(&l.rule).is_none() {
            push(&mut e, "linear.rule", format!("unknown rule '{}'", l.rule));
        }

        let tr = &self.truncated;
        positive(&mut e, "truncated.t_min", tr.t_min);
        if !(tr.t_max == 0.0 || (tr.t_max > tr.t_min && tr.t_max.is_finite())) {
            push(
                &mut e,
                "truncated.t_max",
                format!(
                    "must be 0 (honesty horizon) or exceed truncated.t_min, got {}",
                    tr.t_max
                ),
            );
        }
        at_least(&mut e, "truncated.samples", tr.samples, 8);

        let n = &self.nonlinear;
        positive(&mut e, "nonlinear.epsilon", n.epsilon);
        positive(&mut e, "nonlinear.t_min", n.t_min);
        if !(n.t_max == 0.0 || (n.t_max > n.t_min && n.t_max.is_finite())) {
            push(
                &mut e,
                "nonlinear.t_max",
                format!("must be 0 (honesty horizon) or exceed nonlinear.t_min, got {}", n.t_max),
            );
        }
        at_least(&mut e, "nonlinear.samples", n.samples, 8);

        let b = &self.bounds;
        if b.nus.is_empty() {
            push(&mut e, "bounds.nus", "at least one viscosity is required".to_string());
        }
        for (i, nu) in b.nus.iter().enumerate() {
            positive(&mut e, &format!("bounds.nus[{i}]"), *nu);
        }
        at_least(&mut e, "bounds.samples", b.samples, 1);
        at_least(&mut e, "bounds.lattice_points", b.lattice_points, 2);

        let k = &self.kernel;
        if !(k.t_min >= 0.0 && k.t_min.is_finite()) {
            push(&mut e, "kernel.t_min", format!("must be nonnegative, got {}", k.t_min));
        }
        if !(k.t_max > k.t_min && k.t_max.is_finite()) {
            push(
                &mut e,
                "kernel.t_max",
                format!("must exceed kernel.t_min, got {}", k.t_max),
            );
        }
        at_least(&mut e, "kernel.samples", k.samples, 8);

        let s = &self.nu_star;
        positive(&mut e, "nu_star.xi_max", s.xi_max);
        at_least(&mut e, "nu_star.k_max", s.k_max, 1);
        at_least(&mut e, "nu_star.points", s.points, 2 * s.k_max.max(1));

        let en = &self.energy;
        if en.mode != "linear" && en.mode != "nonlinear" {
            push(
                &mut e,
                "energy.mode",
                format!("expected linear or nonlinear, got '{}'", en.mode),
            );
        }
        if !(en.t_start >= 0.0 && en.t_start.is_finite()) {
            push(
                &mut e,
                "energy.t_start",
                format!("must be nonnegative, got {}", en.t_start),
            );
        }
        positive(&mut e, "energy.span", en.span);
        at_least(&mut e, "energy.snapshots", en.snapshots, 2);

        at_least(&mut e, "oracle.modes", self.oracle.modes, 1);

        // Decay fits need a decade of time, and truncated runs must stay
        // inside the window where the periodic box is not yet felt.
        let horizon = self.honesty_horizon();
        let window = |e: &mut Vec<FieldError>, key: &str, (t_min, t_max): (f64, f64), truncated: bool| {
            if t_max < MIN_WINDOW_RATIO * t_min {
                push(
                    e,
                    key,
                    format!("fit window [{t_min}, {t_max}] spans less than a factor {MIN_WINDOW_RATIO}"),
                );
            }
            if truncated && t_max > horizon * (1.0 + 1e-12) {
                push(
                    e,
                    key,
                    format!("exceeds the truncation-honesty horizon {horizon} of this grid"),
                );
            }
        };
        match self.experiment {
            Experiment::LinearDecayContinuum => window(&mut e, "linear.t_max", (l.t_min, l.t_max), false),
            Experiment::LinearDecayTruncated => window(&mut e, "truncated.t_max", self.truncated_window(), true),
            Experiment::NonlinearDecay => window(&mut e, "nonlinear.t_max", self.nonlinear_window(), true),
            _ => {}
        }

        if e.is_empty() {
            Ok(())
        } else {
            Err(e)
        }
    }

    /// The grid; only meaningful after [`validate`](Self::validate).
    pub fn strip_grid(&self) -> strip_boussinesq::Result<StripGrid> {
        StripGrid::new(self.grid.lx, self.grid.nx, self.grid.ny, self.grid.nu)
    }

    pub fn stepper_config(&self) -> StepperConfig {
        StepperConfig {
            dt: self.stepper.dt,
            cfl_safety: self.stepper.cfl_safety,
            dealias_fraction: self.stepper.dealias_fraction,
            scheme: Scheme::parse(&self.stepper.scheme).unwrap_or(Scheme::StrangRk2),
        }
    }

    /// Initial profile with every amplitude multiplied by `scale`.
    pub fn profile_scaled(&self, scale: f64) -> Profile {
        Profile {
            terms: self
                .profile
                .terms
                .iter()
                .map(|t| ProfileTerm {
                    component: Component::parse(&t.component).unwrap_or(Component::Theta),
                    k: t.k,
                    width: t.width,
                    amplitude: scale * t.amplitude,
                })
                .collect(),
            band_fraction: self.profile.band_fraction,
        }
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            xi_cutoff: self.linear.xi_cutoff,
            xi_points: self.linear.xi_points,
            k_max: self.linear.k_max,
            rule: XiRule::parse(&self.linear.rule).unwrap_or(XiRule::GaussLegendreComposite),
        }
    }

    /// Fit window of the truncated linear run, resolving `t_max = 0`.
    pub fn truncated_window(&self) -> (f64, f64) {
        let t_max = if self.truncated.t_max == 0.0 {
            self.honesty_horizon()
        } else {
            self.truncated.t_max
        };
        (self.truncated.t_min, t_max)
    }

    /// Fit window of the nonlinear run, resolving `t_max = 0`.
    pub fn nonlinear_window(&self) -> (f64, f64) {
        let t_max = if self.nonlinear.t_max == 0.0 {
            self.honesty_horizon()
        } else {
            self.nonlinear.t_max
        };
        (self.nonlinear.t_min, t_max)
    }

    pub fn honesty_horizon(&self) -> f64 {
        0.1 * self.grid.nu * (self.grid.lx / PI).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_values_parse_as_toml_literals() {
        assert_eq!(override_value("3"), toml::Value::Integer(3));
        assert_eq!(override_value("0.5"), toml::Value::Float(0.5));
        assert_eq!(override_value("[1.0, 2.0]").as_array().map(Vec::len), Some(2));
        assert_eq!(override_value("strang-rk4"), toml::Value::String("strang-rk4".into()));
    }

    #[test]
    fn overrides_create_missing_sections() {
        let mut t = toml::Table::new();
        apply_override(&mut t, "grid.nu", "2.0").unwrap();
        assert_eq!(t["grid"]["nu"].as_float(), Some(2.0));
    }

    #[test]
    fn every_default_is_valid() {
        for e in Experiment::ALL {
            assert_eq!(ExperimentConfig::minimal(e).validate(), Ok(()), "{e}");
        }
    }

    #[test]
    fn truncated_window_defaults_to_horizon() {
        let c = ExperimentConfig::minimal(Experiment::LinearDecayTruncated);
        assert_eq!(c.truncated_window(), (10.0, c.honesty_horizon()));
    }
}
