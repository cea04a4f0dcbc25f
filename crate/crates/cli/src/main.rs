//! `corrgraph`: sample correlation curves, build and verify the `K_5`
//! non-closure certificate, and analyse the signed game.
//!
//! Exit codes: 0 success, 1 a check ran and failed, 2 usage or input error,
//! 3 solver failure.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Default seed for every randomized search.
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const SEED_ENV: &str = "CORRGRAPH_SEED";

#[derive(Parser)]
#[command(name = "corrgraph", version, about = "Graph correlation functions over synchronous correlation sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct SearchArgs {
    /// Base seed; CORRGRAPH_SEED takes precedence when set.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Restarts per search dimension.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sample f_ns, f_loc, f_vect and f_q upper bounds on a t-grid as CSV.
    Curves {
        /// `complete:5`, `cycle:7`, `path:4`, `petersen` or `file:<edge list>`.
        #[arg(long)]
        graph: String,
        /// `start:step:stop` or a comma-separated list.
        #[arg(long, default_value = "0:0.05:1")]
        grid: String,
        #[arg(long)]
        fns: bool,
        #[arg(long)]
        floc: bool,
        #[arg(long)]
        fvect: bool,
        /// Five-projection upper bound on f_q (K_5 only, rational gridpoints).
        #[arg(long)]
        fq_upper: bool,
        /// All four curves.
        #[arg(long)]
        all: bool,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Absolute bisection tolerance for f_vect.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build the K_5 non-closure certificate on a list of rational t.
    CertifyNonclosure {
        /// Comma-separated fractions.
        #[arg(long, default_value = "3/10,2/5,1/2,3/5,7/10")]
        t: String,
        /// Certificate destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for one witness file per t.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-check a witness file from its stored matrices.
    VerifyWitness { path: PathBuf },
    /// Signed game report: λ*, supremum and attainment.
    Game {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// `p/q`, `irrational:<decimal>` or `approx:<decimal>`.
        #[arg(long)]
        t: String,
    },
    /// Validate a correlation JSON file and optionally evaluate it on a graph.
    Check {
        path: PathBuf,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Size, symmetry and fractional chromatic number of a graph.
    GraphInfo {
        #[arg(long)]
        graph: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curves { graph, grid, fns, floc, fvect, fq_upper, all, out, svg, tol, search } => {
            let which = commands::curve_selection(fns, floc, fvect, fq_upper, all);
            commands::curves(&graph, &grid, &which, out.as_deref(), svg.as_deref(), tol, &search)
        }
        Command::CertifyNonclosure { t, out, witness_dir, search } => {
            commands::certify_nonclosure(&t, out.as_deref(), witness_dir.as_deref(), &search)
        }
        Command::VerifyWitness { path } => commands::verify_witness(&path),
        Command::Game { n, t } => commands::game(n, &t),
        Command::Check { path, graph, tol } => commands::check(&path, graph.as_deref(), tol),
        Command::GraphInfo { graph } => commands::graph_info(&graph),
    };
    match result {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
