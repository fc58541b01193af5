use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ctrack",
    version,
    about = "Counterfeit ERC-20 token and scam forensics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and index a ledger export, reporting rejected lines.
    Ingest(IngestArgs),
    /// Flag counterfeit candidates and apply the filter rules.
    Scan(ScanArgs),
    /// Detect airdrop and arbitrage scams and summarise losses.
    Detect(DetectArgs),
    /// Build creator, holder and money-flow graphs and token statistics.
    Graph(GraphArgs),
    /// Generate a synthetic ledger with ground truth.
    Synth(SynthArgs),
    /// Run every stage and merge the results into report.json.
    Report(GraphArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Directory holding the ledger JSON Lines files.
    #[arg(long, value_name = "DIR")]
    pub ledger: Option<PathBuf>,
    /// Label file; defaults to labels.json inside the ledger directory when present.
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    /// Target list (JSON array of official tokens).
    #[arg(long, value_name = "FILE")]
    pub targets: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Detector configuration (TOML).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub detect: DetectArgs,
    /// Money-flow expansion depth.
    #[arg(long, value_name = "N", default_value_t = ctrack::graph::DEFAULT_MAX_DEPTH)]
    pub max_depth: u32,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scenario file (TOML).
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}
