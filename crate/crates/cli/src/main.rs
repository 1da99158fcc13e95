//! `greedymod`: greedy modularity community detection from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 internal
//! invariant violation.

mod commands;
mod failure;
mod source;
mod summary;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use greedymod::{Heuristic, StopPolicy};

use crate::source::{GenFlags, SourceArgs};
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "greedymod",
    version,
    about = "Greedy modularity community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a graph and write partition, dendrogram, merge log and summary.
    Detect(DetectArgs),
    /// Write a synthetic graph as an edge list with a JSON metadata sidecar.
    Generate(GenerateArgs),
    /// Turn run artifacts into plot-ready tables.
    Report(ReportArgs),
    /// Run several heuristics on one graph and tabulate the results.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "plain")]
    heuristic: Heuristic,
    #[arg(long, default_value = "negative-dq")]
    stop: StopPolicy,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Run the full structural audit after every merge (slow).
    #[arg(long)]
    audit: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    gen: GenFlags,
    /// Edge-list path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Consolidation ratio per merge.
    Ratio,
    /// Seconds per bucket of consecutive merges.
    Buckets,
    /// Modularity against cumulative time.
    Progress,
    /// Community counts per logarithmic size bin.
    Hist,
    /// Dendrogram height.
    Height,
    /// Power-law fit of elapsed time against node count over run summaries.
    Fit,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Merge log (ratio, buckets, progress).
    #[arg(long)]
    log: Option<PathBuf>,
    /// Partition file (hist).
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Dendrogram file (height).
    #[arg(long)]
    dendrogram: Option<PathBuf>,
    /// Run summaries (fit).
    #[arg(long, num_args = 1..)]
    summaries: Vec<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    bucket: usize,
    /// Report elapsed time as a fraction of the total (progress).
    #[arg(long)]
    normalize: bool,
    /// Histogram bin base.
    #[arg(long, default_value_t = 10)]
    base: u64,
    /// Edge count for progress; defaults to the summary.json beside the log.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated list, at least two.
    #[arg(long, value_delimiter = ',', required = true)]
    heuristics: Vec<Heuristic>,
    #[arg(long, default_value = "negative-dq")]
    stop: StopPolicy,
    /// Run the heuristics on separate threads.
    #[arg(long)]
    parallel: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::Detect(args) => commands::detect(args),
        Command::Generate(args) => commands::generate(args),
        Command::Report(args) => commands::report(args),
        Command::Compare(args) => commands::compare(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("greedymod: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
