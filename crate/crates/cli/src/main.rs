//! `lcanon` — canonical decompositions of CP-semigroup generators, weighted
//! Choi/Kraus transforms, and the associated verification reports.

mod commands;
mod error;
mod files;
mod jsonfmt;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Mode;
use error::CliError;
use lcanon_core::Tolerances;

#[derive(Parser)]
#[command(name = "lcanon", version, about = "Canonical decompositions of CP-semigroup generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Equality tolerance (env LCANON_TOL_EQ).
    #[arg(long, global = true)]
    tol_eq: Option<f64>,
    /// PSD eigenvalue tolerance (env LCANON_TOL_PSD).
    #[arg(long, global = true)]
    tol_psd: Option<f64>,
    /// Reconstruction tolerance (env LCANON_TOL_RECON).
    #[arg(long, global = true)]
    tol_recon: Option<f64>,
    /// Relative Kraus rank cutoff (env LCANON_RANK_TOL).
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the unique (K, Φ) or (H, Φ) decomposition of a generator
    /// relative to a reference operator.
    Canonicalize {
        /// Generator file (superop_matrix, k_plus_kraus, or gksl).
        generator: PathBuf,
        /// Reference operator file; must satisfy Re(tr B) != 0.
        reference: PathBuf,
        /// Decomposition mode.
        #[arg(long, value_enum, default_value = "cp")]
        mode: Mode,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted Choi matrix of a map, with its extreme eigenvalues.
    Choi {
        /// Map file (superop_matrix, k_plus_kraus, or gksl).
        map: PathBuf,
        /// Comma-separated real weights (defaults to all ones).
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kraus operators extracted from the unit-weight Choi matrix of a map.
    Kraus {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a decomposition file against a generator file.
    Verify {
        decomposition: PathBuf,
        generator: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sup-norm table of the formal Choi pre-image diagonal for a weight
    /// rule, demonstrating divergence.
    Witness {
        /// Weight rule: 'geometric:<r>' or 'power:<p>'.
        #[arg(long)]
        weights: String,
        /// Inclusive dimension range 'a:b'.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_override(name: &str, current: f64) -> Result<f64, CliError> {
    match std::env::var(name) {
        Ok(text) => text.parse::<f64>().map_err(|e| {
            CliError::Input(format!("environment variable {name}: cannot parse '{text}': {e}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(current),
        Err(e) => Err(CliError::Input(format!("environment variable {name}: {e}"))),
    }
}

/// Resolution order: built-in default, then LCANON_* environment variables,
/// then command-line flags.
fn resolve_tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    tol.tol_eq = env_override("LCANON_TOL_EQ", tol.tol_eq)?;
    tol.tol_psd = env_override("LCANON_TOL_PSD", tol.tol_psd)?;
    tol.tol_recon = env_override("LCANON_TOL_RECON", tol.tol_recon)?;
    tol.rank_tol = env_override("LCANON_RANK_TOL", tol.rank_tol)?;
    if let Some(v) = cli.tol_eq {
        tol.tol_eq = v;
    }
    if let Some(v) = cli.tol_psd {
        tol.tol_psd = v;
    }
    if let Some(v) = cli.tol_recon {
        tol.tol_recon = v;
    }
    if let Some(v) = cli.rank_tol {
        tol.rank_tol = v;
    }
    tol.validate().map_err(CliError::from_core)?;
    Ok(tol)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = resolve_tolerances(cli)?;
    match &cli.command {
        Command::Canonicalize {
            generator,
            reference,
            mode,
            out,
        } => commands::cmd_canonicalize(generator, reference, *mode, out.as_deref(), &tol),
        Command::Choi { map, weights, out } => {
            commands::cmd_choi(map, weights.as_deref(), out.as_deref(), &tol)
        }
        Command::Kraus { map, out } => commands::cmd_kraus(map, out.as_deref(), &tol),
        Command::Verify {
            decomposition,
            generator,
            out,
        } => commands::cmd_verify(decomposition, generator, out.as_deref(), &tol),
        Command::Witness { weights, dims, out } => {
            commands::cmd_witness(weights, dims, out.as_deref())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
