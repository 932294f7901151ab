use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod io;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "hypervol", version, about = "Volume rigidity of uniform hypergraph frameworks")]
pub struct Cli {
    /// Output format. JSON is the stable contract; text is a summary.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank report of the rigidity matrix of a framework.
    Rank { framework: String },
    /// Generic rigidity verdict from randomized rank trials.
    Rigid {
        hypergraph: String,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Test for a triangulation of the 2-sphere and report its homology class.
    CheckS2 { hypergraph: String },
    /// Upper and lower bounds on the number of congruence classes.
    Bound {
        /// Hypergraph file; omit to use --d and --n.
        hypergraph: Option<String>,
        #[arg(long, requires = "n", conflicts_with = "hypergraph")]
        d: Option<usize>,
        #[arg(long, requires = "d", conflicts_with = "hypergraph")]
        n: Option<usize>,
        /// Pieces of a gluing decomposition (repeatable).
        #[arg(long = "part")]
        parts: Vec<String>,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Class polynomial and congruence classes of a planar bipyramid.
    Bipyramid {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "points")]
        seed: Option<u64>,
        /// Configuration file with the n points.
        #[arg(long)]
        points: Option<String>,
    },
    /// Glue two hypergraphs along a hyperedge.
    Glue {
        first: String,
        second: String,
        /// Hyperedges to identify, e.g. `--at 1,2,4 1,2,3`.
        #[arg(long, num_args = 2, value_names = ["H1", "H2"], required = true)]
        at: Vec<String>,
        /// Keep the common hyperedge in the result.
        #[arg(long)]
        keep_common: bool,
    },
    /// Simplex subdivision or planar vertex split.
    Split {
        hypergraph: String,
        /// Hyperedge to subdivide, e.g. `1,2,3`.
        #[arg(long, conflicts_with_all = ["vertex", "fan"], required_unless_present = "vertex")]
        subdivide: Option<String>,
        #[arg(long, requires = "fan")]
        vertex: Option<usize>,
        /// Fan hyperedges around the split vertex, e.g. `--fan 1,2,3 1,3,4`.
        #[arg(long, num_args = 1..)]
        fan: Vec<String>,
    },
    /// Multi-start Newton count of equivalent frameworks.
    Oracle {
        framework: String,
        #[command(flatten)]
        settings: OracleArgs,
    },
    /// Compare oracle counts with exact bipyramid counts on random instances.
    CrossValidate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        instances: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        starts: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Seed; overrides the HYPERVOL_SEED environment variable.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub dedup_distance: Option<f64>,
    #[arg(long)]
    pub inflation: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            println!("{}", report.render(format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.render(format));
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<commands::Report, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::internal(e.to_string()))?;
    }
    io::check_readable(&commands::input_paths(&cli.command))?;
    commands::execute(cli.command)
}
