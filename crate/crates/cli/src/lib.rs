//! Command-line front end for `curveft`: JSON experiment configs in, CSV and
//! JSON artifacts out, plus the acceptance verification suite.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Parser, Subcommand};

pub use commands::{Failed, Outcome};
pub use config::ExperimentConfig;
pub use verify::{run_criterion, run_suite, CriterionResult, Suite, SuiteReport};

/// Exit code for a run that finished but did not pass.
pub const EXIT_FAILED: u8 = 2;
/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "curveft", version, about = "Fourier transforms of surface measures and frame diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Io {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "curveft-out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a surface and report its mass and curvature range.
    SurfaceInfo(Io),
    /// Transform the (windowed) surface measure on a set of frequencies.
    FtScan(Io),
    /// Compare quadrature with the stationary-phase leading term along a ray.
    SpCompare(Io),
    /// Hemisphere axis profile and symmetry identity.
    Hemisphere(Io),
    /// Normal-cone coverage of a surface or window region.
    Coverage(Io),
    /// Spectrum sums, translated energies, cone partition and frame bounds.
    Frame(Io),
    /// Run the acceptance suite.
    Verify {
        #[arg(long, default_value = "fast")]
        suite: String,
        /// Where to write verify.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let with = |io: &Io, f: fn(&ExperimentConfig, &Path) -> Result<Outcome>| -> Result<Outcome> {
        let cfg = ExperimentConfig::load(&io.config)?;
        f(&cfg, &io.out)
    };
    match &cli.command {
        Command::SurfaceInfo(io) => with(io, commands::surface_info),
        Command::FtScan(io) => with(io, commands::ft_scan),
        Command::SpCompare(io) => with(io, commands::sp_compare),
        Command::Hemisphere(io) => with(io, commands::hemisphere),
        Command::Coverage(io) => with(io, commands::coverage),
        Command::Frame(io) => with(io, commands::frame),
        Command::Verify { suite, out } => commands::verify(suite.parse()?, out.as_deref()),
    }
}

/// Maps a run result to the process exit code.
pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => EXIT_FAILED,
        Err(e) if e.downcast_ref::<Failed>().is_some() => EXIT_FAILED,
        Err(_) => EXIT_USAGE,
    }
}

/// Caps the global rayon pool at `CURVEFT_THREADS` when it is set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CURVEFT_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("CURVEFT_THREADS must be a positive integer"))?;
        anyhow::ensure!(n > 0, "CURVEFT_THREADS must be a positive integer");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}
