//! `potts`: α-expansion, exact MAP, quality certificates and verification batches for Potts
//! instances stored in the POTTS text format.
//!
//! Every command prints one flat JSON object on stdout; diagnostics go to stderr.
//! Exit codes: 0 success, 1 usage, 2 I/O or parse error, 3 enumeration budget exceeded,
//! 4 verification failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "potts", version, about = "Potts MRF inference and α-expansion quality certificates")]
struct Cli {
    /// Log debug diagnostics to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded random 4-connected grid instance.
    Gen(GenArgs),
    /// Run α-expansion to a local minimum.
    SolveExpansion(SolveExpansionArgs),
    /// Exact MAP labeling by exhaustive enumeration.
    SolveMap(SolveMapArgs),
    /// Upper bound on the quality of every expansion local minimum (certified or exact).
    Certify(CertifyArgs),
    /// Upper bound from the energy guarantee alone.
    NaiveBound(NaiveArgs),
    /// Check, on seeded grids, that every expansion local minimum is MAP for its perturbation.
    VerifyTheorem(VerifyArgs),
    /// Exact checks of the LP-guided rounding and of the decomposition inequality.
    RoundCheck(RoundCheckArgs),
    /// Instance dimensions and basic statistics.
    Info(InfoArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    h: usize,
    #[arg(long)]
    w: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    cost_min: i64,
    #[arg(long, default_value_t = 10)]
    cost_max: i64,
    #[arg(long, default_value_t = 0)]
    weight_min: i64,
    #[arg(long, default_value_t = 5)]
    weight_max: i64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SolveExpansionArgs {
    #[arg(long)]
    instance: PathBuf,
    /// `zeros`, `random:SEED`, or a labeling file.
    #[arg(long, default_value = "zeros")]
    init: String,
    /// Comma-separated label order for each sweep (default 0,1,…,k−1).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    #[arg(long, default_value_t = potts::expansion::DEFAULT_MAX_SWEEPS)]
    max_sweeps: usize,
    /// Where to write the resulting labeling.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveMapArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Maximum number of labelings to enumerate.
    #[arg(long, default_value_t = potts::oracle::DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Hamming,
    Gap,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    /// Cutting-plane LP relaxation.
    Certified,
    /// Exhaustive search over self-optimal labelings.
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArithmeticArg {
    Auto,
    Exact,
    Float,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Labeling the bound is measured against.
    #[arg(long = "map")]
    map: PathBuf,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Hamming)]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Certified)]
    method: MethodArg,
    #[arg(long, default_value_t = 20)]
    rounds: usize,
    #[arg(long, default_value_t = 20)]
    cuts_per_round: usize,
    #[arg(long, value_enum, default_value_t = ArithmeticArg::Auto)]
    arithmetic: ArithmeticArg,
    /// Enumeration budget for `--method exact`.
    #[arg(long, default_value_t = potts::oracle::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args, Debug)]
struct NaiveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long = "map")]
    map: PathBuf,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Hamming)]
    objective: ObjectiveArg,
    /// Above this many labelings a heuristic lower bound on the naive bound is reported.
    #[arg(long, default_value_t = potts::oracle::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid shape `HxW`.
    #[arg(long, default_value = "2x3", value_parser = report::parse_shape)]
    shape: (usize, usize),
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    cost_min: i64,
    #[arg(long, default_value_t = 10)]
    cost_max: i64,
    #[arg(long, default_value_t = 0)]
    weight_min: i64,
    #[arg(long, default_value_t = 5)]
    weight_max: i64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct RoundCheckArgs {
    /// Check one instance (requires --labeling); otherwise a seeded batch of random grids.
    #[arg(long, requires = "labeling")]
    instance: Option<PathBuf>,
    #[arg(long)]
    labeling: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "2x2", value_parser = report::parse_shape)]
    shape: (usize, usize),
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Blend weight, a decimal or `p/q` in (0, 1/k) (default 1/(2k)).
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[arg(long)]
    instance: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    let outcome = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::SolveExpansion(a) => commands::solve_expansion(a),
        Command::SolveMap(a) => commands::solve_map(a),
        Command::Certify(a) => commands::certify(a),
        Command::NaiveBound(a) => commands::naive_bound(a),
        Command::VerifyTheorem(a) => commands::verify_theorem(a),
        Command::RoundCheck(a) => commands::round_check(a),
        Command::Info(a) => commands::info(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(report::exit_code(&err))
        }
    }
}
