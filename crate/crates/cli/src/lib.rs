//! Command-line front end: loads model documents, runs classification,
//! inference and limit computations, and emits deterministic reports.

pub mod commands;
pub mod dot;
pub mod model;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{cmd_average, cmd_check, cmd_expect, cmd_graph, cmd_oracle};
pub use model::{load_model, LoadedModel, ModelDocument, RowSpec, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Model(#[from] imc_core::Error),
    #[error("unknown gamble `{0}`")]
    UnknownGamble(String),
}

impl CliError {
    /// Exit-code contract: 0 success, 2 parse/validation failures, 3 size
    /// limits. Analysis verdicts are data and never change the exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(imc_core::Error::SizeLimit(_)) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bound {
    Upper,
    Lower,
}

impl Bound {
    pub fn as_str(&self) -> &'static str {
        match self {
            Bound::Upper => "upper",
            Bound::Lower => "lower",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Instant,
    Average,
}

#[derive(Debug, Parser)]
#[command(name = "imc", about = "Inference in finite-state imprecise Markov chains", version)]
pub struct Cli {
    /// Path to the model JSON document.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Tolerance for limit extraction.
    #[arg(long, global = true, default_value_t = imc_core::DEFAULT_TOL)]
    pub tol: f64,

    /// Iteration budget for limit extraction.
    #[arg(long, global = true, default_value_t = imc_core::DEFAULT_MAX_ITER)]
    pub max_iter: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the model: communication structure, TCR/TCA, ergodicity.
    Check,
    /// k-step upper or lower expectation of a named gamble.
    Expect {
        #[arg(long)]
        gamble: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Bound::Upper)]
        bound: Bound,
        /// Restrict the output to one initial state.
        #[arg(long)]
        state: Option<String>,
    },
    /// k-step or limit upper/lower expected time average of a named gamble.
    Average {
        #[arg(long)]
        gamble: String,
        #[arg(long, conflicts_with = "limit")]
        k: Option<usize>,
        /// Extract the limit value instead of a finite horizon.
        #[arg(long)]
        limit: bool,
        #[arg(long, value_enum, default_value_t = Bound::Upper)]
        bound: Bound,
    },
    /// Emit the upper accessibility graph.
    Graph {
        /// Emit Graphviz DOT instead of a text summary.
        #[arg(long)]
        dot: bool,
        /// Write the output to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the recursions against the brute-force oracle.
    Oracle {
        #[arg(long)]
        gamble: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        mode: Mode,
    },
}

/// Runs one invocation and returns the stdout payload.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let path = cli
        .model
        .as_ref()
        .ok_or_else(|| CliError::Validation("--model <MODEL> is required".into()))?;
    let model = load_model(path)?;
    match &cli.command {
        Command::Check => Ok(cmd_check(&model, cli.format)),
        Command::Expect { gamble, k, bound, state } => {
            cmd_expect(&model, gamble, *k, *bound, state.as_deref(), cli.format)
        }
        Command::Average { gamble, k, limit, bound } => {
            cmd_average(&model, gamble, *k, *limit, *bound, cli.tol, cli.max_iter, cli.format)
        }
        Command::Graph { dot, out } => {
            let text = cmd_graph(&model, *dot);
            match out {
                Some(path) => {
                    std::fs::write(path, text)
                        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Oracle { gamble, k, mode } => {
            let mode = match mode {
                Mode::Instant => imc_core::OracleMode::Instant,
                Mode::Average => imc_core::OracleMode::Average,
            };
            cmd_oracle(&model, gamble, *k, mode, cli.format)
        }
    }
}
