//! `su11`: simulate point-by-point sampling of the SU(1,1) Wigner function.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 oracle tolerance breached,
//! 3 numerical warning escalated by `--strict`.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use config::{Evaluator, RunConfig};
use su11_core::detector::SaturationPolicy;
use su11_core::oracles::Prefactor;
use su11_core::reconstruction::{ArgumentScaling, Kernel};
use su11_core::wigner::CoordinateTag;

/// Why a run stopped, with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<su11_core::Error> for Failure {
    fn from(e: su11_core::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "su11",
    version,
    about = "Sample SU(1,1) Wigner functions of two-mode states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the prepared state to <out>/state.json.
    Prepare,
    /// Sample W on a (τ, χ) grid into <out>/wigner.csv.
    Wigner,
    /// Photon-number histogram of the displaced state into <out>/histogram.csv.
    Histogram,
    /// Invert a Wigner function to one irrep block, <out>/irrep_block.csv.
    Reconstruct,
    /// Compare the pipeline against closed forms or brute force, <out>/compare.csv.
    CompareOracle,
}

fn enum_arg<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

/// Flags override the config file, which overrides the built-in defaults.
#[derive(Debug, Args)]
struct Flags {
    /// JSON run configuration; see `<out>/config.json` of any run for the format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// vacuum | biphoton | tmsv(τ₀,χ₀) | fock(n_a,n_b) | path to a state file.
    #[arg(long, global = true)]
    state: Option<String>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Radial grid as start:stop:count.
    #[arg(long, global = true)]
    grid_tau: Option<String>,
    /// Number of evenly spaced azimuths.
    #[arg(long, global = true)]
    grid_chi: Option<usize>,
    /// hyperboloid | disk (disk spaces the radii evenly in |ξ|).
    #[arg(long, global = true, value_parser = enum_arg::<CoordinateTag>)]
    coords: Option<CoordinateTag>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    #[arg(long, global = true)]
    chi: Option<f64>,
    #[arg(long, global = true)]
    eta_a: Option<f64>,
    #[arg(long, global = true)]
    eta_b: Option<f64>,
    #[arg(long, global = true)]
    n_resolve: Option<usize>,
    /// discard | clip
    #[arg(long, global = true, value_parser = enum_arg::<SaturationPolicy>)]
    policy: Option<SaturationPolicy>,
    #[arg(long, global = true)]
    snr: Option<f64>,
    #[arg(long, global = true)]
    shots: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tail_tol: Option<f64>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// normalized | verbatim
    #[arg(long, global = true, value_parser = enum_arg::<Prefactor>)]
    oracle_variant: Option<Prefactor>,
    /// Bargmann index, e.g. 1 or 3/2.
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, global = true)]
    tau_max: Option<f64>,
    #[arg(long, global = true)]
    tau_nodes: Option<usize>,
    #[arg(long, global = true)]
    chi_nodes: Option<usize>,
    /// gram-corrected | projection
    #[arg(long, global = true, value_parser = enum_arg::<Kernel>)]
    kernel: Option<Kernel>,
    /// half | full
    #[arg(long, global = true, value_parser = enum_arg::<ArgumentScaling>)]
    scaling: Option<ArgumentScaling>,
    /// exact | sampled
    #[arg(long, global = true, value_parser = enum_arg::<Evaluator>)]
    evaluator: Option<Evaluator>,
    /// Exit with code 3 when any point reports truncation leakage.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

macro_rules! overlay {
    ($cfg:ident, $flags:ident, $($field:ident),* $(,)?) => {
        $(if let Some(v) = $flags.$field.clone() { $cfg.$field = v; })*
    };
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        overlay!(
            cfg,
            self,
            state,
            grid_tau,
            grid_chi,
            coords,
            tau,
            chi,
            eta_a,
            eta_b,
            policy,
            seed,
            tail_tol,
            tolerance,
            oracle_variant,
            k,
            levels,
            tau_max,
            tau_nodes,
            chi_nodes,
            kernel,
            scaling,
            evaluator,
            out,
        );
        if self.n_max.is_some() {
            cfg.n_max = self.n_max;
        }
        if self.n_resolve.is_some() {
            cfg.n_resolve = self.n_resolve;
        }
        if self.snr.is_some() {
            cfg.snr = self.snr;
        }
        if self.shots.is_some() {
            cfg.shots = self.shots;
        }
        cfg.strict |= self.strict;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.flags.resolve()?;
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.out.join("config.json"), cfg.to_json())?;
    match cli.command {
        Command::Prepare => commands::prepare(&cfg),
        Command::Wigner => commands::wigner(&cfg),
        Command::Histogram => commands::histogram(&cfg),
        Command::Reconstruct => commands::reconstruct(&cfg),
        Command::CompareOracle => commands::compare_oracle(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("su11: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
