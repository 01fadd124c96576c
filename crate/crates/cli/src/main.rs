//! `dyniso` — acceleration-set analysis and actuator layout synthesis.
//!
//! Subcommands: `analyze`, `cloud`, `design`, `sweep`, `margin`, `effort`,
//! `sequence`. Exit codes: 0 success, 2 input or validation error, 3 I/O
//! error, 4 mathematical infeasibility.

mod commands;
mod manifest;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dyniso::{Error as CoreError, Sampler};

#[derive(Parser)]
#[command(
    name = "dyniso",
    version,
    about = "Attainable CoM acceleration sets, dynamic isotropy scores, and actuator layout synthesis",
    propagate_version = true
)]
pub struct Cli {
    /// Number of sampled unit directions.
    #[arg(long, global = true, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,

    /// Direction sampling scheme.
    #[arg(long, global = true, value_enum, default_value_t = SamplerArg::Fibonacci)]
    pub sampler: SamplerArg,

    /// Seed for the random sampler and all randomized synthesis.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Evaluate thrust-only actuators with the bilateral closed form
    /// `Σ|c_i|·limit_i` instead of `Σ max(0, c_i)·limit_i`.
    #[arg(long, global = true)]
    pub paper_compat: bool,

    /// Artifact output path. Reports (`analyze`, `margin`, `effort`) print
    /// to stdout when omitted; file artifacts (`cloud`, `design`, `sweep`,
    /// `sequence`) require it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Omit timestamps from manifests so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Fibonacci,
    Random,
}

impl SamplerArg {
    pub fn to_core(self) -> Sampler {
        match self {
            SamplerArg::Fibonacci => Sampler::Fibonacci,
            SamplerArg::Random => Sampler::UniformRandom,
        }
    }

    pub fn as_flag_value(self) -> &'static str {
        match self {
            SamplerArg::Fibonacci => "fibonacci",
            SamplerArg::Random => "random",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CloudFormat {
    Csv,
    Ply,
}

#[derive(Subcommand)]
pub enum Command {
    /// Score a morphology: isotropy, extremal directions, ellipsoid spectrum.
    Analyze {
        /// Morphology JSON file.
        morphology: PathBuf,
    },
    /// Export per-direction maximum accelerations as CSV or PLY.
    Cloud {
        morphology: PathBuf,
        #[arg(long, value_enum, default_value_t = CloudFormat::Csv)]
        format: CloudFormat,
    },
    /// Synthesize a near-uniform radial-legs morphology by Thomson-energy
    /// minimization.
    Design {
        /// Number of legs (at least 3).
        #[arg(long)]
        legs: usize,
        /// Independent seeded restarts of the optimizer.
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Generate and score randomized morphology variants per leg count.
    Sweep {
        /// Comma-separated leg counts, e.g. 12,20,32.
        #[arg(long, value_delimiter = ',', required = true)]
        leg_counts: Vec<usize>,
        /// Variants per leg count.
        #[arg(long)]
        count_per: usize,
        /// Also write each variant's morphology JSON next to the CSV.
        #[arg(long)]
        emit_morphologies: bool,
    },
    /// Stability margin of a required corrective acceleration.
    Margin {
        morphology: PathBuf,
        /// Required acceleration, three comma-separated numbers (m/s²).
        #[arg(long)]
        accel: String,
    },
    /// Minimum-energy actuator effort realizing a desired acceleration.
    Effort {
        morphology: PathBuf,
        /// Desired acceleration, three comma-separated numbers (m/s²).
        #[arg(long)]
        accel: String,
    },
    /// Score an ordered list of morphology files (one path per line,
    /// relative to the list file).
    Sequence {
        list: PathBuf,
    },
}

/// CLI failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad input, parse failure, violated invariant.
    Input(String),
    /// Exit 3: filesystem failure.
    Io(String),
    /// Exit 4: mathematically infeasible request.
    Math(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Math(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Io(msg) | CliError::Math(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SingularEllipsoid { .. } | CoreError::InfeasibleAcceleration { .. } => {
                CliError::Math(err.to_string())
            }
            _ => CliError::Input(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("dyniso: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
