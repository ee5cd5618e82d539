//! `snex`: ingest corpora, extract social networks, evaluate them against a
//! benchmark and inspect per-actor keywords.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "snex", version, about = "Social network extraction from document corpora")]
struct Cli {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, global = true, env = "SNEX_CONFIG")]
    config: Option<PathBuf>,

    /// Log verbosity: -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a corpus artifact (documents, index, manifest) from JSON lines
    /// files or directories of text files.
    Ingest(IngestArgs),
    /// Extract a social network for a list of seed actors.
    Extract(ExtractArgs),
    /// Compare an extracted graph with a benchmark graph.
    Evaluate(EvaluateArgs),
    /// Rank disambiguation keywords for actors.
    Keywords(KeywordsArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Input files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Artifact directory to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Srs,
    Usr,
    Ars,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "noK", alias = "nok")]
    NoK,
    #[value(name = "K1", alias = "k1")]
    K1,
    #[value(name = "K2", alias = "k2")]
    K2,
    #[value(name = "K1K2", alias = "k1k2")]
    K1K2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    Graphml,
    Json,
    Edgelist,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExecutionArg {
    Sequential,
    Parallel,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Corpus artifact, JSON lines file or text directory. Optional for ARS.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Seed list: one actor per line, optional TAB and comma-separated attributes.
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Relation threshold for the chosen method.
    #[arg(long)]
    alpha: Option<f64>,
    /// Keyword augmentation of SRS pair queries.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Bibliographic records for ARS (.jsonl or .bib).
    #[arg(long)]
    records: Option<PathBuf>,
    /// ARS query keyword.
    #[arg(long)]
    keyword: Option<String>,
    /// Graph output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Graph format; inferred from --out when omitted.
    #[arg(long, value_enum)]
    format: Option<GraphFormatArg>,
    /// Pair-score CSV output.
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long, value_enum)]
    execution: Option<ExecutionArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Extracted graph (G1).
    extracted: PathBuf,
    /// Benchmark graph (G2).
    benchmark: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
    /// Also report threshold coverage of this pair-score CSV.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Threshold for the coverage report; defaults to each method's alpha.
    #[arg(long, requires = "scores")]
    alpha: Option<f64>,
    /// Size of the pair universe for coverage; defaults to C(n, 2) over the
    /// actors in the score file.
    #[arg(long, requires = "scores")]
    potential: Option<u64>,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KeywordsArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Actor name; repeatable.
    #[arg(long = "actor")]
    actors: Vec<String>,
    /// Seed list, as for extract.
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: KeywordFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KeywordFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = commands::load_config(cli.config.as_deref()).and_then(|config| match cli.command {
        Command::Ingest(args) => commands::ingest(&args),
        Command::Extract(args) => commands::extract(config, &args),
        Command::Evaluate(args) => commands::evaluate(&config, &args),
        Command::Keywords(args) => commands::keywords(config, &args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("snex: {error:#}");
            ExitCode::from(code)
        }
    }
}
