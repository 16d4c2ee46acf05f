//! `wimp`: command-line front end for the weighted improper coloring solvers.
//!
//! Exit codes: 0 success, 1 usage, 2 input or parse failure, 3 failed
//! precondition (including an invalid coloring or decomposition under
//! `validate`), 4 resource guard, 70 internal error.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wimp_core::decomposition::Strategy;

#[derive(Debug, Parser)]
#[command(name = "wimp", version, about = "Weighted improper coloring of weighted digraphs")]
pub struct Cli {
    /// Use 128-bit integers for weight numerators and denominators.
    #[arg(long, global = true)]
    pub wide: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the weighted improper chromatic number and a witness.
    Solve(SolveArgs),
    /// Print all lower and upper bounds as key=value lines.
    Bounds(BoundsArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Build or check tree decompositions.
    #[command(subcommand)]
    Decomp(DecompCommand),
    /// Check a coloring against a graph.
    Validate(ValidateArgs),
    /// Run experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    FptIndegree,
    FptBudget,
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::FptIndegree => "fpt-indegree",
            Method::FptBudget => "fpt-budget",
            Method::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    MinDegree,
    MinFill,
    ExactSmall,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::MinDegree => Strategy::MinDegree,
            StrategyArg::MinFill => Strategy::MinFill,
            StrategyArg::ExactSmall => Strategy::ExactSmall,
        }
    }
}

/// How to obtain a tree decomposition when one is needed.
#[derive(Debug, Clone, Args)]
pub struct DecompositionArgs {
    /// PACE `.td` file; built from the graph when omitted.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    /// Root bag, 1-based.
    #[arg(long, default_value_t = 1)]
    pub root: usize,
    /// Heuristic used when no decomposition file is given.
    #[arg(long, value_enum, default_value_t = StrategyArg::MinFill)]
    pub strategy: StrategyArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Graph file (`p wig` or `p wug`).
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Run exact, fpt-budget and fpt-indegree concurrently and compare.
    #[arg(long, conflicts_with = "method")]
    pub all_methods: bool,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
    /// Weight precision for fpt-budget; the least sufficient value when
    /// omitted.
    #[arg(long)]
    pub bits: Option<u32>,
    /// Print memo-table counters.
    #[arg(long)]
    pub stats: bool,
    /// Witness coloring file; with --all-methods one file per method,
    /// suffixed with the method name.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Vertex cap for the exact method.
    #[arg(long, default_value_t = wimp_core::exact::DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Cap on the estimated dynamic-programming work of the fpt methods.
    #[arg(long, default_value_t = commands::DEFAULT_STATE_LIMIT)]
    pub state_limit: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Defective-coloring reduction: arcs of weight 1/(d+1) both ways.
    Defective {
        /// Undirected graph: `p wug`, `p wig` (underlying graph) or DIMACS
        /// `p edge`.
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add a zero-weight arc for every missing ordered pair.
    CompleteEmbed {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition gadget with its width-2 path decomposition.
    Partition {
        /// Positive multiset elements.
        #[arg(required = true)]
        values: Vec<u64>,
        /// Graph file.
        #[arg(long)]
        out: PathBuf,
        /// Decomposition file; defaults to the graph path with extension `td`.
        #[arg(long)]
        td_out: Option<PathBuf>,
    },
    /// Seeded random digraph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Dyadic weights m/2^bits instead of rational ones.
        #[arg(long, conflicts_with = "max_den")]
        bits: Option<u32>,
        /// Largest denominator of rational weights.
        #[arg(long, default_value_t = 10)]
        max_den: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DecompCommand {
    /// Build a decomposition of the underlying graph.
    Build {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::MinFill)]
        strategy: StrategyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decomposition against a graph.
    Validate {
        graph: PathBuf,
        decomposition: PathBuf,
        #[arg(long, default_value_t = 1)]
        root: usize,
    },
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub graph: PathBuf,
    pub coloring: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Search sub-cubic graphs with at most one weight-1 edge per vertex
    /// for one that needs more than two colors.
    Conjecture {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome =
        if cli.wide { commands::run::<i128>(cli.command) } else { commands::run::<i64>(cli.command) };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
