//! `fermi-eos`: scattering solutions, pressure tables, the verification
//! suite and exponent optimization from one TOML config.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_formats, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
    VerificationFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::VerificationFailed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::VerificationFailed(n) => write!(f, "verification failed: {n} check(s) did not pass"),
        }
    }
}

impl From<fermi_eos_core::Error> for CliError {
    fn from(e: fermi_eos_core::Error) -> Self {
        match e {
            fermi_eos_core::Error::InvalidInput(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fermi-eos", version, about = "Dilute Fermi gas pressure toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the zero-energy scattering equation for the configured potential.
    Scatter(Common),
    /// Tabulate free and corrected pressures over the thermo grid.
    Eos(Common),
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run only checks whose name starts with this string.
        #[arg(long)]
        only: Option<String>,
    },
    /// Optimize the error exponents exactly.
    Exponents(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config; the built-in default is used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg (overrides output.formats).
    #[arg(long)]
    format: Option<String>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FERMI_EOS_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("FERMI_EOS_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot set thread count: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let (common, only) = match &cli.command {
        Command::Scatter(c) | Command::Eos(c) | Command::Exponents(c) => (c, None),
        Command::Verify { common, only } => (common, only.as_deref()),
    };
    let cfg = RunConfig::load(common.config.as_deref())?;
    let out = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let formats = match &common.format {
        Some(f) => parse_formats(std::slice::from_ref(f))?,
        None => parse_formats(&cfg.output.formats)?,
    };
    match cli.command {
        Command::Scatter(_) => commands::scatter(&cfg, &out, &formats),
        Command::Eos(_) => commands::eos(&cfg, &out, &formats),
        Command::Verify { .. } => commands::verify(&cfg, only, &out, &formats),
        Command::Exponents(_) => commands::exponents(&cfg, &out, &formats),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fermi-eos: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
