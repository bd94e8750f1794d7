//! Command-line front end.
//!
//! Every subcommand writes one data set as CSV (JSON for `params`).
//! Frequencies are given in units of ω_c, so ω_c = 1 and ω₀ = 1 + δ. Flags
//! can also come from a `key = value` file passed with `--config`; flags on
//! the command line take precedence.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use commands::{
    cmd_fidelity, cmd_ladder, cmd_params, cmd_phase_diagram, cmd_spectrum, cmd_sweep, Artifact,
};
pub use config::{expand_config, parse_config};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fmrabi",
    version,
    about = "Frequency-modulated Rabi model: effective deep-strong JC simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective parameters, RWA checks and zero point as JSON.
    #[command(args_override_self = true)]
    Params(ParamsArgs),
    /// Relative couplings against the modulation amplitude.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Fidelity between exact and approximate dynamics.
    #[command(args_override_self = true)]
    Fidelity(FidelityArgs),
    /// Ground-state phase diagram over (δ, ξ).
    #[command(args_override_self = true)]
    PhaseDiagram(PhaseDiagramArgs),
    /// Ground-state mean photon number against ξ.
    #[command(args_override_self = true)]
    Ladder(LadderArgs),
    /// Jaynes–Cummings levels against the coupling.
    #[command(args_override_self = true)]
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Modulation frequency v.
    #[arg(long, default_value_t = 0.33)]
    pub v: f64,
    /// Detuning δ = ω₀ − ω_c.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Bare coupling g.
    #[arg(long, default_value_t = 0.05)]
    pub g: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Modulation amplitude ξ.
    #[arg(long, default_value_t = 0.0)]
    pub xi: f64,
    /// Factor by which each RWA ratio must clear its bound.
    #[arg(long, default_value_t = crate::modulation::DEFAULT_RWA_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.0)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 301)]
    pub xi_points: usize,
    /// Level of |g_c|/Δ_{m₀} whose crossings are reported in the metadata.
    #[arg(long, default_value_t = 0.01)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowUnit {
    /// 2π/v
    Modulation,
    /// 2π/|g_r|
    Rabi,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 2.48)]
    pub xi: f64,
    #[arg(long, value_enum, default_value_t = FrameArg::First)]
    pub frame: FrameArg,
    /// Window unit; defaults to modulation periods for the first frame and
    /// effective Rabi periods for the second.
    #[arg(long, value_enum)]
    pub window_unit: Option<WindowUnit>,
    /// Window length in units of `--window-unit`.
    #[arg(long, default_value_t = 1.0)]
    pub periods: f64,
    /// Absolute window length; overrides `--periods`.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long, default_value_t = crate::dynamics::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Real coherent amplitude α of the initial cavity state.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    #[arg(long, default_value_t = 200)]
    pub steps_per_period: u32,
    /// Convergence-guard tolerance on amplitudes.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 12)]
    pub max_halvings: u32,
    /// Sideband cutoff of the exact first-frame model.
    #[arg(long)]
    pub bessel_cutoff: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseDiagramArgs {
    #[arg(long, default_value_t = 0.33)]
    pub v: f64,
    #[arg(long, default_value_t = 0.05)]
    pub g: f64,
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 201)]
    pub delta_points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 601)]
    pub xi_points: usize,
    /// Pre-scan step in ξ for boundary detection.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    /// Cell CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Boundary CSV; defaults to `<out>` with `_boundaries` appended to the stem.
    #[arg(long)]
    pub boundaries_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.0)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 601)]
    pub xi_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.5)]
    pub g_max: f64,
    #[arg(long, default_value_t = 351)]
    pub g_points: usize,
    /// Highest excitation number n of the |n,±⟩ doublets listed.
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::StepTooLarge { .. } => EXIT_CONVERGENCE,
        _ => EXIT_CONFIG,
    }
}

fn execute(cli: &Cli) -> crate::Result<Vec<Artifact>> {
    match &cli.command {
        Command::Params(a) => cmd_params(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fidelity(a) => cmd_fidelity(a),
        Command::PhaseDiagram(a) => cmd_phase_diagram(a),
        Command::Ladder(a) => cmd_ladder(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match expand_config(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let artifacts = match execute(&cli) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    for artifact in artifacts {
        let written = match &artifact.path {
            Some(path) => std::fs::write(path, &artifact.body)
                .map(|_| log::info!("wrote {}", path.display()))
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout
                .write_all(artifact.body.as_bytes())
                .map_err(|e| format!("cannot write output: {e}")),
        };
        if let Err(msg) = written {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_CONFIG;
        }
    }
    EXIT_OK
}
