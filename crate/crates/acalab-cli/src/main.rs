//! Command-line front end for the ring-automaton laboratory: space-time
//! simulation artifacts, exact and sampled dynamics classification, rule
//! surveys, communication-class queries and the clustering pipeline.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "acalab", version, about = "Asynchronous cellular automata laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one ring and write a space-time artifact.
    Simulate(SimulateArgs),
    /// Dynamics verdict for one (rule, ring, scheme) system.
    Classify(ClassifyArgs),
    /// Classify every minimal-representative rule over a ring-size range.
    Scan(ScanArgs),
    /// Convergence-condition surveys and per-rule validation.
    Theorem(TheoremArgs),
    /// Communication classes of one system under exact analysis.
    Commclasses(CommclassesArgs),
    /// Encode a CSV table into ring configurations and cluster it.
    Cluster(ClusterArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    /// Every cell updates each step.
    Sync,
    /// One uniformly random cell updates per step.
    Fully,
    /// Each cell updates independently with probability --alpha.
    Alpha,
    /// A random adjacent pair updates together each step.
    Skew,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Full transition-graph analysis; a proof, but exponential in n.
    Exact,
    /// Seeded sampling with a cell-update budget; observations only.
    Empirical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Portable bitmap (P1), one image row per normalized step.
    Pbm,
    /// ASCII art, '.' for 0 and '#' for 1.
    Txt,
    /// Density trace, one row per normalized step.
    Csv,
    /// Rows, densities and manifest in one object.
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SimulateArgs {
    /// Wolfram rule number.
    #[arg(long)]
    rule: u8,
    /// Ring size in cells.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Per-cell update probability, strictly between 0 and 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Normalized steps to run; the artifact gets this many rows plus the
    /// start row.
    #[arg(long)]
    steps: usize,
    /// RNG seed; required whenever the run draws randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Explicit start configuration as a 0/1 string of length n.
    #[arg(long)]
    start: Option<String>,
    /// Bernoulli density of the random start configuration.
    #[arg(long, default_value_t = 0.5)]
    d_ini: f64,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value_t = FormatArg::Txt)]
    format: FormatArg,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Wolfram rule number.
    #[arg(long)]
    rule: u8,
    /// Ring size in cells.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Per-cell update probability, strictly between 0 and 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exact graph analysis or sampled trials.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Trials to sample in empirical mode.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Cell-update budget per empirical trial.
    #[arg(long, default_value_t = 1_000_000)]
    max_updates: u64,
    /// Bernoulli density of empirical start configurations.
    #[arg(long, default_value_t = 0.5)]
    d_ini: f64,
    /// RNG seed; required in empirical mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Per-cell update probability, strictly between 0 and 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Inclusive ring-size range, written a:b.
    #[arg(long)]
    n_range: String,
    /// Exact graph analysis or sampled trials.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Trials to sample in empirical mode.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Cell-update budget per empirical trial.
    #[arg(long, default_value_t = 1_000_000)]
    max_updates: u64,
    /// Bernoulli density of empirical start configurations.
    #[arg(long, default_value_t = 0.5)]
    d_ini: f64,
    /// RNG seed; required in empirical mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum, default_value_t = TableFormatArg::Csv)]
    format: TableFormatArg,
}

#[derive(Args)]
struct TheoremArgs {
    /// List the rules with a positive convergence verdict, one per line.
    #[arg(long)]
    list: bool,
    /// With --list: only rules claimed to drain to both fixed points.
    #[arg(long)]
    both: bool,
    /// With --list: survey all 256 rules instead of the 88 minimal ones.
    #[arg(long)]
    all_rules: bool,
    /// Print one rule's verdict as JSON.
    #[arg(long)]
    rule: Option<u8>,
    /// Check one rule's claim against exact pair-update reachability.
    #[arg(long)]
    validate: Option<u8>,
    /// Inclusive ring-size range for --validate, written a:b.
    #[arg(long, default_value = "4:9")]
    n_range: String,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CommclassesArgs {
    /// Wolfram rule number.
    #[arg(long)]
    rule: u8,
    /// Ring size in cells.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Per-cell update probability, strictly between 0 and 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Emit a JSON report instead of the bare class count.
    #[arg(long)]
    json: bool,
    /// Include class members as bit strings in the JSON report.
    #[arg(long)]
    members: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Target cluster count.
    #[arg(long)]
    k: usize,
    /// Comma-separated rule pool; defaults to the full candidate set.
    #[arg(long)]
    rules: Option<String>,
    /// RNG seed driving the rule draws.
    #[arg(long)]
    seed: u64,
    /// Encoding spec JSON; derived by equal-frequency binning when absent.
    #[arg(long)]
    encoding: Option<PathBuf>,
    /// Labels CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-level partitions and participation as JSON.
    #[arg(long)]
    levels: Option<PathBuf>,
    /// Write validity indices over the final labeling as JSON.
    #[arg(long)]
    indices: Option<PathBuf>,
    /// Write the effective encoding spec for reuse.
    #[arg(long)]
    emit_encoding: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::run_simulate(args),
        Command::Classify(args) => commands::run_classify(args),
        Command::Scan(args) => commands::run_scan(args),
        Command::Theorem(args) => commands::run_theorem(args),
        Command::Commclasses(args) => commands::run_commclasses(args),
        Command::Cluster(args) => commands::run_cluster(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
