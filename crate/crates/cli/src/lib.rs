//! Library side of the `excon` command: argument definitions, the report
//! format and the subcommands.

pub mod commands;
pub mod error;
pub mod modules;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use excon::dsl::{elaborate, parse, ElabOptions, DEFAULT_MAX_DIM};
use excon::field::{FieldSpec, PrimeField, Rationals};

use commands::{Job, Oracle};
use error::{usage, CliError};

#[derive(Debug, Parser)]
#[command(name = "excon", version, about = "Exact contexts, noncommutative tensor products and Tor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Presentation file.
    pub file: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Ground field, overriding the file header: `Q` or `Fp:<p>`.
    #[arg(long)]
    pub field: Option<FieldSpec>,
    /// Exit with status 1 unless every verdict passes.
    #[arg(long, value_parser = ["pass"])]
    pub expect: Option<String>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timings: bool,
    /// Worker threads for independent checks (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exactness, exact-pair and hypergenerator verdicts of a context.
    Check {
        #[command(flatten)]
        common: Common,
        context: String,
    },
    /// Build the noncommutative tensor product of a context.
    Nct {
        #[command(flatten)]
        common: Common,
        context: String,
        #[arg(long, value_enum, default_value = "none")]
        oracle: Oracle,
        /// Write the resulting algebra to this path as a presentation file.
        #[arg(long)]
        emit_algebra: Option<PathBuf>,
    },
    /// Dimensions of Tor_i of a right and a left module.
    Tor {
        #[command(flatten)]
        common: Common,
        right: String,
        left: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// The Tor criterion for the localization of a context, with its cross-checks.
    Theorem1 {
        #[command(flatten)]
        common: Common,
        context: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Projective dimension of a module, or the pd inequalities of a context.
    Pd {
        #[command(flatten)]
        common: Common,
        target: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Rigidity of the projection of an extension, or of right multiplication by an element.
    Rigid {
        #[command(flatten)]
        common: Common,
        name: String,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Check { common, .. }
            | Command::Nct { common, .. }
            | Command::Tor { common, .. }
            | Command::Theorem1 { common, .. }
            | Command::Pd { common, .. }
            | Command::Rigid { common, .. } => common,
        }
    }

    fn max_degree(&self) -> usize {
        match self {
            Command::Tor { max_degree, .. } | Command::Theorem1 { max_degree, .. } | Command::Pd { max_degree, .. } => {
                *max_degree
            }
            _ => 0,
        }
    }
}

fn max_dim() -> Result<usize, CliError> {
    match std::env::var("EXCON_MAX_DIM") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("EXCON_MAX_DIM must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

/// Parses, elaborates and runs one subcommand.
pub fn run(cmd: &Command) -> Result<report::Report, CliError> {
    let common = cmd.common();
    let path = &common.file;
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let file = parse(&src)?;
    let opts = ElabOptions { max_dim: max_dim()? };
    let job = Job {
        file_name: Path::new(path).file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into()),
        max_degree: cmd.max_degree(),
        timings: common.timings,
        command: cmd,
    };
    match common.field.or(file.field).unwrap_or(FieldSpec::Rationals) {
        FieldSpec::Rationals => commands::run(&elaborate(&file, Rationals, &opts)?, &job),
        FieldSpec::PrimeField(p) => commands::run(&elaborate(&file, PrimeField::new(p)?, &opts)?, &job),
    }
}

