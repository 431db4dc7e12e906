//! `covdepth`: random access coverage depth of linear codes from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covdepth::Error;

const CSV_HELP: &str = "\
CSV layouts:
  exact        target,num,den,decimal
  simulate     target,mean,std_dev,std_err
  closed-form  x,n_cols,num,den,t_max,normalized   (ext-mds, ext-simplex)
               s,count                              (mds, simplex)
               s,j,beta                             (hamming, nonzero entries)
               q,k,n,num,den,decimal                (avg-general, avg-systematic)
  sweep        x,n_cols,num,den,t_max,normalized,std_err,engine
  balance      target,num,den,decimal
  bounds       bound,num,den,decimal
  search       bound,num,den,decimal
  duality      name,k,n,balanced,dual_balanced,counterexample_candidate

Targets and columns are 1-based. Exit codes: 0 success, 2 usage error,
3 guard exceeded, 4 invariant violation.";

#[derive(Parser)]
#[command(
    name = "covdepth",
    version,
    about = "Expected coverage depth of linear codes over finite fields"
)]
#[command(after_long_help = CSV_HELP)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Worker threads for the engines (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Largest column count for subset enumeration.
    #[arg(long, global = true)]
    pub max_enum_bits: Option<u32>,
    /// Lift every size guard.
    #[arg(long, global = true)]
    pub force: bool,
    /// Leave the timing field out of JSON output.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Output format; defaults to CSV for closed-form and sweep, JSON otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where the generator matrix comes from.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Matrix file: a `q=<order>` header, then one row per line.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Named code such as `simplex:q=2,k=3`, `hamming:r=3` or `mds:q=7,k=3,n=6`.
    #[arg(long)]
    pub family: Option<String>,
}

/// Which vectors must be recovered. Defaults to every `e_i`.
#[derive(Args, Clone, Default)]
#[group(multiple = false)]
pub struct TargetArgs {
    /// Information symbol `i`, i.e. the basis vector `e_i`.
    #[arg(long)]
    pub target: Option<usize>,
    /// Column `g_i` of the generator matrix.
    #[arg(long)]
    pub column: Option<usize>,
    /// Comma-separated information symbols that must all be recovered.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EngineArg {
    Alpha,
    Beta,
    Dp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClosedFamily {
    ExtMds,
    ExtSimplex,
    Mds,
    Hamming,
    Simplex,
    AvgGeneral,
    AvgSystematic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepEngineArg {
    Alpha,
    Beta,
    Dp,
    ExtMds,
    ExtSimplex,
    MonteCarlo,
}

#[derive(Subcommand)]
pub enum Command {
    /// Exact expectations of the draw count.
    Exact {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum, default_value = "alpha")]
        engine: EngineArg,
    },
    /// Seeded Monte Carlo estimate of the draw count.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent random streams; results do not depend on the thread count.
        #[arg(long, default_value_t = 16)]
        streams: u32,
        /// Per-trial draw limit (default 10^6 n).
        #[arg(long)]
        draw_cap: Option<u64>,
    },
    /// Closed-form values for structured codes.
    ClosedForm {
        #[arg(long, value_enum)]
        family: ClosedFamily,
        /// Parameters such as `q=2,k=4` (`hamming` takes `q`, `r`, `i`).
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 1)]
        x_min: usize,
        /// Last number of identity blocks (ext-mds, ext-simplex).
        #[arg(long)]
        x_max: Option<usize>,
    },
    /// `T_max` of a systematic code with repeated identity blocks.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        x_min: usize,
        #[arg(long)]
        x_max: usize,
        #[arg(long, value_enum, default_value = "alpha")]
        engine: SweepEngineArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Whether every column has the same recovery expectation.
    Balance {
        #[command(flatten)]
        source: Source,
        /// Also check the Cartesian product with this named code.
        #[arg(long)]
        product: Option<String>,
        /// Also probe the permutation automorphism group (n <= 8).
        #[arg(long)]
        paut: bool,
    },
    /// Lower bounds on the optimal `T_max`.
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Random search for small `T_max`.
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample only systematic generators.
        #[arg(long)]
        systematic: bool,
    },
    /// Balance of codes and of their duals.
    Duality {
        /// Named code (repeatable).
        #[arg(long)]
        family: Vec<String>,
        /// Matrix file (repeatable).
        #[arg(long)]
        matrix: Vec<PathBuf>,
        /// Number of random codes to add.
        #[arg(long, default_value_t = 0)]
        random: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn estimated_cost(guard: &str, required: u64) -> String {
    match guard {
        "subset-enumeration" => format!("2^{required} column subsets"),
        "dp-oracle" => format!("2^{required} chain states"),
        "recovery-family" => format!("{required} minimal recovery sets"),
        "beta-states" => format!("{required} union counters"),
        "codeword-enumeration" => format!("{required} codewords"),
        _ => format!("{required} units"),
    }
}

fn report(err: &CliError) -> u8 {
    match err {
        CliError::Usage(msg) => {
            eprintln!("error: {msg}");
            2
        }
        CliError::Core(e @ Error::TooLarge { guard, required, .. }) => {
            eprintln!("error: {e}");
            eprintln!(
                "estimated cost: {}; rerun with --force to lift the guard",
                estimated_cost(guard, *required)
            );
            3
        }
        CliError::Core(e @ Error::InvariantViolation(_)) => {
            eprintln!("error: {e}");
            4
        }
        CliError::Core(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.global.threads;
    let result = covdepth::exec::with_threads(threads, || commands::run(&cli.global, cli.command));
    match result.and_then(|out| commands::write(&cli.global, &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => ExitCode::from(report(&e)),
    }
}
