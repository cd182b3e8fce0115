use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperdec::decoder::{LocalSolver, Scheme};

mod commands;

/// Greedy ball-local decoding of homology codes on cell complexes.
#[derive(Parser)]
#[command(name = "hyperdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cell counts, logical qubits and check weights of a code.
    Info {
        #[command(flatten)]
        source: Source,
        /// Also write the complex in the text format.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Decode one error with exact syndromes until convergence.
    Decode {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// `none`, `cells=3,17`, `plane=AB` (axes A and B through the
        /// origin of a torus) or `random=P`.
        #[arg(long, default_value = "none")]
        error: String,
        #[arg(long, default_value_t = 50)]
        max_rounds: usize,
    },
    /// Noisy memory trials at one noise point.
    MemorySim {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Data flip probability per qubit per step.
        #[arg(long, default_value_t = 0.001)]
        p: f64,
        /// Measurement error probability; defaults to `p`.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 50)]
        tau: usize,
        /// Noise-free round budget; `⌈4·log2 N⌉` when absent.
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Print the syndrome weight after every step of every trial.
        #[arg(long)]
        weights: bool,
    },
    /// Grid of memory trials written as CSV.
    Sweep(SweepArgs),
}

/// Where the complex comes from.
#[derive(Args, Clone)]
struct Source {
    /// Hypercubic torus, as `d=4 L=3`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", conflicts_with = "file")]
    torus: Option<Vec<String>>,
    /// Complex in the text format.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Qubit grade; `max(1, d/2)` when absent.
    #[arg(long)]
    grade: Option<usize>,
    /// Put Z checks on the grade above the qubits.
    #[arg(long)]
    dual: bool,
}

#[derive(Args, Clone)]
struct DecoderArgs {
    #[arg(long, default_value_t = 2)]
    r_dec: u32,
    #[arg(long, default_value = "deterministic")]
    scheme: Scheme,
    /// Center density for the randomized scheme; `1/|ball(2·r_dec)|` when absent.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = hyperdec::decoder::MAX_KERNEL_CAP)]
    kernel_cap: usize,
    #[arg(long, value_enum, default_value = "frontier")]
    solver: SolverArg,
    /// Stored states per ball solve before falling back to greedy descent; 0 for no limit.
    #[arg(long, default_value_t = hyperdec::decoder::DEFAULT_STATE_BUDGET)]
    state_budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SolverArg {
    Frontier,
    GrayCode,
}

impl From<SolverArg> for LocalSolver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Frontier => LocalSolver::Frontier,
            SolverArg::GrayCode => LocalSolver::GrayCode,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with sweep fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    grade: Option<usize>,
    #[arg(long = "L", value_delimiter = ',')]
    l: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    r_dec: Option<Vec<u32>>,
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    state_budget: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Record real wall time in `wall_ms` (otherwise 0).
    #[arg(long)]
    wall_time: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { source, emit } => commands::info(&source, emit.as_deref()),
        Command::Decode {
            source,
            decoder,
            error,
            max_rounds,
        } => commands::decode(&source, &decoder, &error, max_rounds),
        Command::MemorySim {
            source,
            decoder,
            p,
            q,
            tau,
            delta,
            trials,
            weights,
        } => commands::memory_sim(
            &source,
            &decoder,
            commands::MemoryArgs {
                p,
                q: q.unwrap_or(p),
                tau,
                delta,
                trials,
                weights,
            },
        ),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hyperdec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
