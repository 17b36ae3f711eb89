//! Command-line front end for `pricecomp`.
//!
//! stdout carries exactly one JSON document per invocation (help and
//! version text excepted); stderr carries human diagnostics. Exit codes:
//! 0 success or true, 1 valid but false, 2 input error, 3 budget exhausted.

pub mod commands;
pub mod document;
pub mod error;
pub mod gen;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Method, Mode, Response};
use error::{CliError, CliResult, EXIT_OK};
use gen::GenArgs;

pub use document::{AssignmentDocument, AssignmentEntry, GameDocument, PricesDocument};
pub use error::{EXIT_BUDGET, EXIT_FALSE, EXIT_INPUT};

const DEFAULT_BUDGET: u64 = 1_000_000;
// caps the filtered grid product; branch-and-bound visits far fewer points
const DEFAULT_SUBSIDY_BUDGET: u64 = 100_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "pricecomp",
    version,
    about = "Exact equilibrium and subsidy solver for price competition games"
)]
pub struct Cli {
    /// Worker threads for parallel searches; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an instance family as a game document.
    Gen(Box<GenArgs>),
    /// Decide whether an assignment and prices form an equilibrium.
    Verify {
        game: PathBuf,
        assignment: PathBuf,
        prices: PathBuf,
    },
    /// Find equilibrium prices for an assignment, if any exist.
    Price { game: PathBuf, assignment: PathBuf },
    /// Search all non-fractional equilibria.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Optimal welfare over worst equilibrium welfare.
    Poa {
        game: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Subsidies enforcing an assignment (the welfare optimum by default).
    Subsidize {
        game: PathBuf,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::MinGrid)]
        mode: Mode,
        /// Follow the grid search with coordinate descent over midpoints.
        #[arg(long)]
        refine: bool,
        #[arg(long, default_value_t = DEFAULT_SUBSIDY_BUDGET)]
        budget: u64,
    },
}

/// Everything one invocation prints and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn failure(error: &CliError, detail: String) -> Outcome {
    let body = json!({"error": {"kind": error.kind(), "message": error.to_string()}});
    Outcome {
        code: error.exit_code(),
        stdout: document::to_pretty(&body),
        stderr: detail,
    }
}

fn execute(command: &Command) -> CliResult<Response> {
    match command {
        Command::Gen(args) => gen::cmd_gen(args).map(|report| Response {
            report,
            code: EXIT_OK,
            note: None,
        }),
        Command::Verify {
            game,
            assignment,
            prices,
        } => commands::cmd_verify(game, assignment, prices),
        Command::Price { game, assignment } => commands::cmd_price(game, assignment),
        Command::Solve {
            game,
            method,
            budget,
        } => commands::cmd_solve(game, *method, *budget),
        Command::Poa { game, budget } => commands::cmd_poa(game, *budget),
        Command::Subsidize {
            game,
            assignment,
            mode,
            refine,
            budget,
        } => commands::cmd_subsidize(game, assignment.as_deref(), *mode, *refine, *budget),
    }
}

/// Parses `args` (program name first) and runs the command in-process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome {
                code: EXIT_OK,
                stdout: e.render().to_string(),
                stderr: String::new(),
            }
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            return failure(&CliError::Usage(first), message);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let error = CliError::Usage(format!("cannot start {} threads: {e}", cli.threads));
            let detail = format!("error: {error}\n");
            return failure(&error, detail);
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(response) => Outcome {
            code: response.code,
            stdout: document::to_pretty(&response.report),
            stderr: response.note.map(|n| format!("{n}\n")).unwrap_or_default(),
        },
        Err(error) => {
            let detail = format!("error: {error}\n");
            failure(&error, detail)
        }
    }
}
