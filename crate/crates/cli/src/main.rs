use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod chsh;
mod entropy;
mod kz;
mod output;
mod statespec;
mod swap;
mod teleport;

/// Hybrid qubit/cat-state entanglement toolkit.
#[derive(Parser, Debug)]
#[command(name = "hes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep K(z) by series and by truncated matrices, with the CHSH violation.
    Kz(kz::KzArgs),
    /// Closed-form CHSH optimum against a multi-start numerical maximization.
    Chsh(chsh::ChshArgs),
    /// Monte-Carlo spin or parity teleportation.
    Teleport(teleport::TeleportArgs),
    /// Monte-Carlo entanglement swapping onto two modes.
    Swap(swap::SwapArgs),
    /// Entropy and Schmidt coefficients of a named state.
    Entropy(entropy::EntropyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; `kz` defaults to csv, everything else to json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Truncation flags shared by every subcommand that builds mode states.
#[derive(Args, Debug, Clone)]
pub struct TruncationArgs {
    /// Fixed Fock cutoff for every mode (even). Adaptive when omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Poisson tail tolerance for the adaptive cutoff.
    #[arg(long, default_value_t = hes_core::fock::ADAPTIVE_TAIL_TOL)]
    pub tol: f64,
}

impl TruncationArgs {
    /// Cutoff large enough for every amplitude in `zs`.
    pub fn dim_for(&self, zs: &[f64]) -> Result<usize> {
        if let Some(d) = self.dim {
            return Ok(d);
        }
        let mut d = 0;
        for &z in zs {
            d = d.max(hes_core::fock::mode_dim_for(z, self.tol)?);
        }
        Ok(d)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Kz(a) => kz::run(&a),
        Command::Chsh(a) => chsh::run(&a),
        Command::Teleport(a) => teleport::run(&a),
        Command::Swap(a) => swap::run(&a),
        Command::Entropy(a) => entropy::run(&a),
    }
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", one_line(first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}
