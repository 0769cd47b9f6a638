//! `unfolder`: fixpoint listings, goal evaluation, traces, coverage,
//! abstract interpretation and declarative debugging from the terminal.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Fuel for evaluation unless `UNFOLDER_FUEL` or `--fuel` says otherwise.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "unfolder", version, about = "Fixpoint unfolding semantics for a small lazy functional language")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Leave comparisons symbolic while unfolding
    #[arg(long, global = true)]
    pub defer_comparisons: bool,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    pub clean_mode: Mode,
    /// Show the position of every step in traces
    #[arg(long, global = true)]
    pub positions: bool,
    /// Show ⊥ steps in traces
    #[arg(long, global = true)]
    pub bots: bool,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Shorthand for `--output json`
    #[arg(long, global = true)]
    pub json: bool,
    /// Evaluation fuel
    #[arg(long, global = true, env = "UNFOLDER_FUEL", value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: Option<u64>,
    /// Seed for the random rewriting strategy
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Optimized,
    General,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyArg {
    Outermost,
    Innermost,
    Random,
}

fn steps_arg() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::new().range(1..)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a program and report the clean mode
    Check { file: PathBuf },
    /// Print I_0 .. I_N, stopping early at a fixpoint
    Unfold {
        file: PathBuf,
        #[arg(long, default_value_t = 5, value_parser = steps_arg())]
        steps: usize,
    },
    /// Evaluate a ground goal with the facts of the fixpoint sequence
    Run {
        goal: String,
        file: PathBuf,
        #[arg(long, default_value_t = 10, value_parser = steps_arg())]
        steps: usize,
        /// Cross-check against small-step rewriting with the program
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Outermost)]
        strategy: StrategyArg,
    },
    /// Show the rule sequences that compute a goal
    Trace {
        goal: String,
        file: PathBuf,
        #[arg(long, default_value_t = 10, value_parser = steps_arg())]
        steps: usize,
    },
    /// Rule coverage per step and a test set covering the rules
    Coverage {
        file: PathBuf,
        #[arg(long, default_value_t = 5, value_parser = steps_arg())]
        steps: usize,
        /// Stop at the first step that covers every rule
        #[arg(long)]
        stop_early: bool,
    },
    /// Abstract fixpoint with catamorphism rules from the program or `--spec`
    Abstract {
        file: PathBuf,
        /// Catamorphism rules replacing the program's `cata` section
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 10, value_parser = steps_arg())]
        steps: usize,
    },
    /// Answer questions about a goal's computation to locate a wrong rule
    Debug {
        goal: String,
        file: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = steps_arg())]
        steps: usize,
    },
    /// Start the HTTP debugging service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Append accepted mutations to this file and replay it on startup
        #[arg(long)]
        session_log: Option<PathBuf>,
        /// Origin allowed by CORS; any origin when unset
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(commands::Failure::Quiet) => ExitCode::SUCCESS,
        Err(commands::Failure::Message(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
