use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pagerank_games::verify::Model;

const AFTER_HELP: &str = "\
Graphs are edge lists: one `u v` pair per line, a single label for an isolated
vertex, `#` starts a comment. Use `-` to read the graph from stdin.

A --q file holds one non-negative number per line, one line per vertex, in
label order (numeric labels first, ascending, then the rest lexicographically).
The numbers must sum to 1 within 1e-9.

Exit codes: 0 Nash equilibrium / success, 1 not an equilibrium or a
disagreement, 2 usage or unsupported model/graph combination, 3 numerical failure.";

#[derive(Debug, Parser)]
#[command(name = "prgame", version, about = "PageRank network-formation games", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Jump probability
    #[arg(long, global = true, default_value_t = 0.15)]
    pub alpha: f64,
    /// Jump distribution file (defaults to uniform)
    #[arg(long, global = true, value_name = "FILE")]
    pub q: Option<PathBuf>,
    /// Absolute tolerance for comparing probabilities
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Largest biconnected-block attachment count the general verifiers accept
    #[arg(long, global = true, default_value_t = 12)]
    pub k_max: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the random generators
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report wall-clock time (JSON `timing_ms` is null otherwise)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Deletion,
    RequestDelete,
    AddDelete,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Deletion => Model::Deletion,
            ModelArg::RequestDelete => Model::RequestDelete,
            ModelArg::AddDelete => Model::AddDelete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Complete,
    Path,
    Cycle,
    Star,
    Tree,
    Gnp,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the graph is a Nash equilibrium
    Verify {
        #[arg(long, value_enum, default_value_t = ModelArg::Deletion)]
        model: ModelArg,
        graph: PathBuf,
    },
    /// Best response of a single vertex
    BestResponse {
        #[arg(long, value_enum, default_value_t = ModelArg::Deletion)]
        model: ModelArg,
        /// Vertex label
        #[arg(long)]
        vertex: String,
        graph: PathBuf,
    },
    /// Stationary PageRank of every vertex
    Pagerank { graph: PathBuf },
    /// Return potentials towards one target, or the full matrix
    Potentials {
        /// Target vertex label
        #[arg(long)]
        target: Option<String>,
        graph: PathBuf,
    },
    /// Run best-response dynamics until equilibrium, a cycle or the step limit
    Dynamics {
        #[arg(long, value_enum, default_value_t = ModelArg::Deletion)]
        model: ModelArg,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        /// Write the final graph to this file
        #[arg(long, value_name = "FILE")]
        final_graph: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Compare the fast verifier with exhaustive enumeration on random graphs
    OracleCheck {
        #[arg(long, value_enum, default_value_t = ModelArg::Deletion)]
        model: ModelArg,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Draw a random jump distribution per trial instead of uniform q
        #[arg(long)]
        random_q: bool,
    },
    /// Write a test graph as an edge list
    Generate {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Vertex count (leaf count for a star)
        #[arg(long)]
        n: usize,
        /// Edge probability for gnp
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Keep only the largest connected component of a gnp graph
        #[arg(long)]
        largest_component: bool,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}
