use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cm_torus::lattice::HadamardMode;

use crate::commands::{self, Command, Input};
use crate::config::ConfigFile;
use crate::error::{CliError, EXIT_INVARIANT, EXIT_OK};
use crate::report::Envelope;

/// Caps the worker pool of the parallel enumerations.
pub const THREADS_ENV: &str = "CMTORUS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cmtorus", version, about = "Mumford-Tate tori of CM abelian varieties: lattices, bounds, finite-level enumerations")]
pub struct Args {
    /// Input configuration (TOML).
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Reflex datum and reflex-norm matrix of the configured CM type.
    Reflex,
    /// Mumford-Tate rank and |F| (all types with `all_types = true`).
    Rank,
    /// Degree, order and index bounds for the [context] block.
    Bounds,
    /// Count Mumford-Tate points of the [ring] block.
    EnumerateMt,
    /// Count Hodge points of the [ring] block.
    EnumerateHg,
    /// Image and index of Hg x scalars -> MT on the [ring] block.
    Psi,
    /// Norm-one filtration quotients of the [filtration] block.
    Filtration,
    /// Cartan subgroup and normalizer of the [cartan] block.
    Cartan,
    /// Jacobians of y^p = x(1 - x).
    Family {
        #[arg(long)]
        p: Option<u64>,
        /// Inclusive range of primes, e.g. 3..23.
        #[arg(long, value_parser = parse_range)]
        sweep: Option<(u64, u64)>,
    },
    /// Maximal |det| of n x n matrices with 0/1 entries.
    Hadamard {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Read fixtures from this directory instead of the built-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

impl Sub {
    pub fn to_command(&self) -> Command {
        match self {
            Sub::Reflex => Command::Reflex,
            Sub::Rank => Command::Rank,
            Sub::Bounds => Command::Bounds,
            Sub::EnumerateMt => Command::EnumerateMt,
            Sub::EnumerateHg => Command::EnumerateHg,
            Sub::Psi => Command::Psi,
            Sub::Filtration => Command::Filtration,
            Sub::Cartan => Command::Cartan,
            Sub::Family { p, sweep } => Command::Family { p: *p, sweep: *sweep },
            Sub::Hadamard { n, mode, samples, seed } => Command::Hadamard {
                n: *n,
                mode: match mode {
                    Mode::Exhaustive => HadamardMode::Exhaustive,
                    Mode::Sampled => HadamardMode::Sampled { samples: *samples, seed: *seed },
                },
            },
            Sub::Selftest { fixtures } => Command::Selftest { fixtures: fixtures.as_ref().map(|p| p.display().to_string()) },
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Resource(e.to_string()))
}

/// Runs the parsed invocation and returns the process exit code.
pub fn execute(args: &Args) -> Result<i32, CliError> {
    configure_threads()?;
    let start = Instant::now();
    let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
    let name = args.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let input = file.as_ref().map(|f| Input { file: f, source_name: &name });
    let report = commands::run(&args.command.to_command(), input)?;
    let code = if report.has_violation() { EXIT_INVARIANT } else { EXIT_OK };
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Json => {
            let env = Envelope { report, timing_ms: start.elapsed().as_secs_f64() * 1e3 };
            env.to_json() + "\n"
        }
    };
    match &args.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(code)
}
