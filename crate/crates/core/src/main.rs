use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dikspace::inference::DEFAULT_MIN_SUPPORT;
use dikspace::metric::DEFAULT_MAX_DIM;
use dikspace::pipeline::{run, OutputFormat, PipelineConfig, STAGE_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// Runs the data → information → knowledge pipeline and writes one
/// artifact per stage. Set DIKSPACE_LOG (e.g. `info`, `debug`) for logs.
#[derive(Debug, Parser)]
#[command(name = "dikspace", version)]
struct Args {
    /// Data set: elements, topology, labels, data functions and relations, metric.
    #[arg(long)]
    dataset: PathBuf,
    /// Domain signature: classes, functions, relations, methods.
    #[arg(long)]
    domain: PathBuf,
    /// Images of the labelled open sets, data functions and relations.
    #[arg(long)]
    interpretation: PathBuf,
    /// Horn rules, one per line.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Similarity threshold; overrides the data set's own.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Highest simplex dimension of the Rips complex and of its Betti numbers.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Fewest supporting instances for a conjecture.
    #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
    min_support: usize,
    /// Run stages 1 through this one.
    #[arg(long, default_value_t = STAGE_NAMES.len())]
    stage: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Artifact formats to write; all three by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DIKSPACE_LOG", "warn")).init();
    let args = Args::parse();
    let mut config = PipelineConfig::new(args.dataset, args.domain, args.interpretation, args.out);
    config.rules = args.rules;
    config.epsilon = args.epsilon;
    config.max_dim = args.max_dim;
    config.min_support = args.min_support;
    config.stage = args.stage;
    if !args.format.is_empty() {
        config.formats = args
            .format
            .iter()
            .map(|f| match f {
                Format::Text => OutputFormat::Text,
                Format::Json => OutputFormat::Json,
                Format::Dot => OutputFormat::Dot,
            })
            .collect::<BTreeSet<_>>();
    }
    match run(&config) {
        Ok(summary) => {
            print!("{}", summary.report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
