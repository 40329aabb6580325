use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use strip_boussinesq_cli::{load, run, to_toml, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "bstrip",
    version,
    about = "Decay experiments for the Boussinesq system on a strip"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment named in a configuration file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the fully defaulted configuration of an experiment.
    Defaults { experiment: String },
    /// Continuum linear decay ladder.
    LinearDecayContinuum(ExperimentArgs),
    /// Linear decay ladder on the truncated grid.
    LinearDecayTruncated(ExperimentArgs),
    /// Small-amplitude nonlinear run and its decay ladder.
    NonlinearDecay(ExperimentArgs),
    /// Sampled verification of the region envelopes.
    SymbolBounds(ExperimentArgs),
    /// Decay of the frequency-space kernel integral.
    KernelIntegral(ExperimentArgs),
    /// Critical viscosity and its grid-search confirmation.
    NuStar(ExperimentArgs),
    /// Energy identity residuals.
    EnergyCheck(ExperimentArgs),
    /// Transform, operator and propagator self-checks.
    OracleSuite(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// Configuration file; defaults apply to every absent key.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

/// Flags override configuration keys and are recorded in the manifest.
#[derive(Args, Default)]
struct Flags {
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lx: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Any key, as `section.key=value`; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Flags {
    fn overrides(&self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        if let Some(d) = &self.output_dir {
            out.push(("output_dir".into(), toml_string(&d.to_string_lossy())));
        }
        let mut num = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((key.to_string(), v));
            }
        };
        num("seed", self.seed.map(|v| v.to_string()));
        num("grid.nu", self.nu.map(float));
        num("grid.lx", self.lx.map(float));
        num("grid.nx", self.nx.map(|v| v.to_string()));
        num("grid.ny", self.ny.map(|v| v.to_string()));
        num("stepper.dt", self.dt.map(float));
        num("nonlinear.epsilon", self.epsilon.map(float));
        for s in &self.set {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| format!("--set expects KEY=VALUE, got '{s}'"))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }
}

fn float(v: f64) -> String {
    // Keep a decimal point so TOML reads the value as a float.
    format!("{v:?}")
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn execute(text: &str, overrides: Vec<(String, String)>) -> ExitCode {
    let loaded = match load(text, &overrides) {
        Ok(l) => l,
        Err(e) => return fail(2, e),
    };
    match run(&loaded) {
        Ok(outcome) => {
            for (k, v) in &outcome.summary {
                println!("{k} = {v}");
            }
            println!("manifest = {}", outcome.output_dir.join("manifest.toml").display());
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code(), e),
    }
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Run { config, flags } => {
            let text = match read(&config) {
                Ok(t) => t,
                Err(code) => return code,
            };
            return match flags.overrides() {
                Ok(o) => execute(&text, o),
                Err(e) => fail(2, e),
            };
        }
        Command::Defaults { experiment } => {
            return match Experiment::parse(&experiment) {
                Some(e) => {
                    print!("{}", to_toml(&ExperimentConfig::minimal(e)));
                    ExitCode::SUCCESS
                }
                None => fail(2, format!("unknown experiment '{experiment}'")),
            };
        }
        Command::LinearDecayContinuum(a) => (Experiment::LinearDecayContinuum, a),
        Command::LinearDecayTruncated(a) => (Experiment::LinearDecayTruncated, a),
        Command::NonlinearDecay(a) => (Experiment::NonlinearDecay, a),
        Command::SymbolBounds(a) => (Experiment::SymbolBounds, a),
        Command::KernelIntegral(a) => (Experiment::KernelIntegral, a),
        Command::NuStar(a) => (Experiment::NuStar, a),
        Command::EnergyCheck(a) => (Experiment::EnergyCheck, a),
        Command::OracleSuite(a) => (Experiment::OracleSuite, a),
    };
    let text = match &args.config {
        Some(p) => match read(p) {
            Ok(t) => t,
            Err(code) => return code,
        },
        None => String::new(),
    };
    let table: toml::Table = match text.parse() {
        Ok(t) => t,
        Err(e) => return fail(2, format!("{e}")),
    };
    let mut overrides = match args.flags.overrides() {
        Ok(o) => o,
        Err(e) => return fail(2, e),
    };
    match table.get("experiment").and_then(|v| v.as_str()) {
        Some(name) if name != experiment.name() => {
            return fail(
                2,
                format!("experiment: the file names '{name}' but the subcommand is '{experiment}'"),
            );
        }
        Some(_) => {}
        None => overrides.insert(0, ("experiment".into(), toml_string(experiment.name()))),
    }
    execute(&text, overrides)
}
