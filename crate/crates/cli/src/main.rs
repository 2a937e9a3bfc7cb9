//! Batch command-line front end for the disaffection pipeline.
//!
//! One subcommand per pipeline stage; every output file starts with a
//! provenance header (tool version, config hash, seed). All randomness
//! flows from a single `--seed`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::Settings;

/// Exit codes: 1 usage, 2 missing file, 3 validation failure, 4 internal
/// invariant breach.
#[derive(Debug)]
pub enum CliError {
    Missing(PathBuf),
    Validation(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Missing(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Missing(path) => write!(f, "missing file: {}", path.display()),
            CliError::Validation(msg) => write!(f, "{msg}"),
            CliError::Invariant(msg) => write!(f, "invariant breached: {msg}"),
        }
    }
}

impl From<disaffection::Error> for CliError {
    fn from(e: disaffection::Error) -> Self {
        match e {
            disaffection::Error::Invariant(msg) => CliError::Invariant(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "disaffection",
    version,
    about = "Political-disaffection analytics over short-text corpora",
    disable_help_subcommand = true
)]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress the timestamp line so identical runs emit identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inter-coder reliability (Krippendorff's alpha) of an annotation file.
    Alpha(commands::alpha::AlphaArgs),
    /// Train a stage classifier with one seeded sweep.
    Train(commands::train::TrainArgs),
    /// Stratified k-fold evaluation of a stage classifier.
    Eval(commands::train::EvalArgs),
    /// Run the three-stage relevance chain over a tweet corpus.
    Chain(commands::chain::ChainArgs),
    /// Survey-aligned ratio series for one indicator and interval.
    Series(commands::analyze::SeriesArgs),
    /// Pearson correlation against a survey indicator over the three
    /// canonical intervals.
    Correlate(commands::analyze::CorrelateArgs),
    /// Local mean-plus-k-sigma peaks of the daily ratio series.
    Peaks(commands::analyze::PeaksArgs),
    /// Link each peak day to the headline its tweets discussed.
    LinkNews(commands::analyze::LinkNewsArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings::load(cli.config.as_deref(), cli.seed, cli.deterministic)?;
    match cli.command {
        Command::Alpha(args) => commands::alpha::run(&settings, args),
        Command::Train(args) => commands::train::run_train(&settings, args),
        Command::Eval(args) => commands::train::run_eval(&settings, args),
        Command::Chain(args) => commands::chain::run(&settings, args),
        Command::Series(args) => commands::analyze::run_series(&settings, args),
        Command::Correlate(args) => commands::analyze::run_correlate(&settings, args),
        Command::Peaks(args) => commands::analyze::run_peaks(&settings, args),
        Command::LinkNews(args) => commands::analyze::run_link_news(&settings, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Usage problems (unknown subcommand, bad flags) exit 1.
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
