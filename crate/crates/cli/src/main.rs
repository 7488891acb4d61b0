//! Pipeline entry point: ingest -> tag -> split -> profile -> metrics ->
//! stats -> report, plus the synthetic simulator. Every artifact is
//! emitted bit-stably; all randomness flows from explicit --seed flags.

mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "decision-bench",
    version,
    about = "Delegation-benchmark analysis pipeline over task-trajectory records"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a record stream; write the violation report.
    Ingest(IngestArgs),
    /// Tag every step with the frozen rule tagger; optionally run the
    /// emergent-taxonomy audit.
    Tag(TagArgs),
    /// Deterministic stratified Stage-1/Stage-2 split of the task ids.
    Split(SplitArgs),
    /// Build profile cards from Stage-1 records.
    Profile(ProfileArgs),
    /// Per-cell metric suite: rollup, fidelity, self-preference, ceiling.
    Metrics(MetricsArgs),
    /// Inference: mixed-effects fit and hypervolume bootstrap CIs.
    Stats(StatsArgs),
    /// Generate a synthetic sweep with known ground truth.
    Simulate(SimulateArgs),
    /// Cross-check artifact provenance and write the summary report.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct IngestArgs {
    /// Gzip JSON-lines record file.
    #[arg(long)]
    pub records: PathBuf,
    /// Pool registry JSON; defaults to the built-in reference pool.
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct TagArgs {
    #[arg(long)]
    pub records: PathBuf,
    /// Tagger configuration JSON; defaults to the frozen built-in rules.
    #[arg(long)]
    pub tagger_config: Option<PathBuf>,
    /// Free-form skill labels, one per line, for the emergent audit.
    #[arg(long)]
    pub audit_labels: Option<PathBuf>,
    /// Keyword rule table (TSV keyword<TAB>skill) for the audit mapping.
    #[arg(long)]
    pub audit_keywords: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    pub fraction: f64,
    #[arg(long, default_value_t = 10)]
    pub seed: u64,
    /// Stratum table (TSV task_id<TAB>stratum); defaults to
    /// benchmark(:shard) strata derived from the records.
    #[arg(long)]
    pub strata: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ProfileArgs {
    #[command(subcommand)]
    variant: ProfileVariant,
}

#[derive(Subcommand)]
enum ProfileVariant {
    /// Deterministic static-metric cards from Stage-1 traces.
    BuildC2(BuildC2Args),
}

#[derive(Args)]
pub struct BuildC2Args {
    /// Stage-1 records (gzip JSON lines).
    #[arg(long)]
    pub stage1: PathBuf,
    #[arg(long)]
    pub tagger_config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub records: PathBuf,
    /// Stage-1 records used for peer statistics (fidelity, ceiling).
    #[arg(long)]
    pub stage1: PathBuf,
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long)]
    pub tagger_config: Option<PathBuf>,
    /// Fidelity rank cutoff.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Peer-realization rate for the counterfactual ceiling.
    #[arg(long, default_value_t = 1.0)]
    pub realization_rate: f64,
    #[arg(long, default_value_t = 1.05)]
    pub cost_ref_multiplier: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long, default_value_t = 5000)]
    pub n_boot: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.05)]
    pub cost_ref_multiplier: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sweep shape orchestrators x benchmarks x conditions, e.g. 11x3x5.
    #[arg(long, default_value = "11x3x5")]
    pub cells: String,
    /// Tasks per cell.
    #[arg(long, default_value_t = 20)]
    pub tasks: usize,
    /// Peer-pool size (orchestrators are the first pool members).
    #[arg(long, default_value_t = 11)]
    pub pool_size: usize,
    /// Probability that a task delegates under a delegating policy.
    #[arg(long, default_value_t = 0.5)]
    pub propensity: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Ingest(args) => commands::ingest::run(&args),
        Command::Tag(args) => commands::tag::run(&args),
        Command::Split(args) => commands::split::run(&args),
        Command::Profile(args) => match args.variant {
            ProfileVariant::BuildC2(args) => commands::profile::run(&args),
        },
        Command::Metrics(args) => commands::metrics::run(&args),
        Command::Stats(args) => commands::stats::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Report(args) => commands::report::run(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
