mod args;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use ctrack::chain_store::{
    ingest, load_labels, IndexedLedger, IngestReport, LabelSet, LedgerPaths, LABELS_FILE,
};
use ctrack::counterfeit::{load_targets, TargetToken};
use ctrack::pipeline::{json_bytes, run_detect, run_pipeline, run_scan, with_threads, Files};
use ctrack::scam::DetectorConfig;
use ctrack::synth::{generate, ScenarioConfig};

use args::{Cli, Command, Common, DetectArgs, GraphArgs, ScanArgs, SynthArgs};
use manifest::{sha256_hex, RunManifest, MANIFEST_FILE};

const INGEST_REPORT_FILE: &str = "ingest_report.json";

#[derive(Debug)]
enum Failure {
    /// Bad flags or configuration; exit 1.
    Usage(String),
    /// Unreadable or malformed data; exit 2.
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl From<ctrack::Error> for Failure {
    fn from(e: ctrack::Error) -> Self {
        match e {
            ctrack::Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Data(m) => eprintln!("data error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Ingest(a) => cmd_ingest(&a.common),
        Command::Scan(a) => cmd_scan(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Graph(a) => cmd_graph(&a, false),
        Command::Report(a) => cmd_graph(&a, true),
        Command::Synth(a) => cmd_synth(&a),
    }
}

fn require<'a, T>(value: &'a Option<T>, flag: &str) -> Outcome<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("missing required flag {flag}")))
}

fn existing_file(path: &Path, flag: &str) -> Outcome<Vec<u8>> {
    if !path.is_file() {
        return Err(Failure::Usage(format!(
            "{flag}: no such file: {}",
            path.display()
        )));
    }
    std::fs::read(path).map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))
}

/// Output directory plus the manifest being assembled for this run.
struct Run {
    out: PathBuf,
    manifest: RunManifest,
    started: Instant,
}

impl Run {
    fn new(subcommand: &str, out: &Option<PathBuf>) -> Outcome<Self> {
        let out = require(out, "--out")?.clone();
        let mut manifest = RunManifest::new(subcommand);
        manifest.input("--out", &out);
        Ok(Self {
            out,
            manifest,
            started: Instant::now(),
        })
    }

    fn finish(mut self, files: Files) -> Outcome<()> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| Failure::Data(format!("cannot create {}: {e}", self.out.display())))?;
        for (name, bytes) in &files {
            let path = self.out.join(name);
            std::fs::write(&path, bytes)
                .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
            self.manifest
                .outputs
                .insert(name.clone(), sha256_hex(bytes));
        }
        self.manifest.wall_time_ms = self.started.elapsed().as_millis();
        let path = self.out.join(MANIFEST_FILE);
        std::fs::write(&path, json_bytes(&self.manifest))
            .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
        eprintln!(
            "{}: wrote {} file(s) to {}",
            self.manifest.subcommand,
            files.len() + 1,
            self.out.display()
        );
        Ok(())
    }
}

struct Loaded {
    ledger: IndexedLedger,
    report: IngestReport,
}

fn load_ledger(common: &Common, run: &mut Run) -> Outcome<Loaded> {
    let dir = require(&common.ledger, "--ledger")?;
    if !dir.is_dir() {
        return Err(Failure::Usage(format!(
            "--ledger: not a directory: {}",
            dir.display()
        )));
    }
    run.manifest.input("--ledger", dir);
    run.manifest.threads = common.threads;

    let labels = match &common.labels {
        Some(p) => {
            let bytes = existing_file(p, "--labels")?;
            run.manifest.input("--labels", p);
            run.manifest.digest("labels", &bytes);
            load_labels(p)?
        }
        None => {
            let p = dir.join(LABELS_FILE);
            if p.is_file() {
                run.manifest
                    .digest("labels", &existing_file(&p, "--labels")?);
                load_labels(&p)?
            } else {
                LabelSet::default()
            }
        }
    };

    let ingested = with_threads(common.threads, || {
        ingest(&LedgerPaths::from_dir(dir), labels)
    })??;
    let counts = ingested.ledger.counts();
    for (k, v) in [
        ("blocks", counts.blocks),
        ("transactions", counts.transactions),
        ("internal_transactions", counts.internal_transactions),
        ("contracts", counts.contracts),
        ("erc20_contracts", counts.erc20_contracts),
        ("tokens", counts.tokens),
        ("token_transfers", counts.token_transfers),
        ("rejected_lines", ingested.report.rejected()),
    ] {
        run.manifest.count(k, v);
    }
    if ingested.report.rejected() > 0 {
        eprintln!(
            "warning: {} input line(s) rejected",
            ingested.report.rejected()
        );
    }
    Ok(Loaded {
        ledger: ingested.ledger,
        report: ingested.report,
    })
}

fn load_target_list(path: &Option<PathBuf>, run: &mut Run) -> Outcome<Vec<TargetToken>> {
    let path = require(path, "--targets")?;
    let bytes = existing_file(path, "--targets")?;
    run.manifest.input("--targets", path);
    run.manifest.digest("targets", &bytes);
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Failure::Usage("--targets: target list is empty".into()));
    }
    let targets = load_targets(path)?;
    if targets.is_empty() {
        return Err(Failure::Usage("--targets: target list is empty".into()));
    }
    Ok(targets)
}

fn load_config(path: &Option<PathBuf>, run: &mut Run) -> Outcome<DetectorConfig> {
    let cfg = match path {
        Some(p) => {
            let bytes = existing_file(p, "--config")?;
            run.manifest.input("--config", p);
            let text = String::from_utf8(bytes)
                .map_err(|_| Failure::Usage(format!("--config: {} is not UTF-8", p.display())))?;
            DetectorConfig::from_toml_str(&text)
                .map_err(|e| Failure::Usage(format!("--config: {e}")))?
        }
        None => DetectorConfig::default(),
    };
    run.manifest
        .digest("detector_config", cfg.to_toml_string().as_bytes());
    Ok(cfg)
}

fn cmd_ingest(common: &Common) -> Outcome<()> {
    let mut run = Run::new("ingest", &common.out)?;
    let loaded = load_ledger(common, &mut run)?;
    #[derive(serde::Serialize)]
    struct IngestSummary<'a> {
        counts: ctrack::chain_store::LedgerCounts,
        report: &'a IngestReport,
    }
    let mut files = Files::new();
    files.insert(
        INGEST_REPORT_FILE.into(),
        json_bytes(&IngestSummary {
            counts: loaded.ledger.counts(),
            report: &loaded.report,
        }),
    );
    run.finish(files)
}

fn scan_counts(run: &mut Run, scan: &ctrack::pipeline::ScanOutput) {
    run.manifest.count("candidates", scan.candidates.len());
    run.manifest
        .count("confirmed", scan.outcome.confirmed.len());
    run.manifest.count("filtered", scan.outcome.filtered.len());
    run.manifest
        .count("needs_review", scan.outcome.needs_review.len());
}

fn detect_counts(run: &mut Run, detect: &ctrack::pipeline::DetectOutput) {
    run.manifest
        .count("airdrop_findings", detect.detections.airdrops.len());
    run.manifest
        .count("arbitrage_evidence", detect.detections.arbitrage.len());
    run.manifest
        .count("scam_victims", detect.summary.overall.victims);
}

fn cmd_scan(a: &ScanArgs) -> Outcome<()> {
    let mut run = Run::new("scan", &a.common.out)?;
    let targets = load_target_list(&a.targets, &mut run)?;
    let loaded = load_ledger(&a.common, &mut run)?;
    let scan = with_threads(a.common.threads, || run_scan(&loaded.ledger, &targets))??;
    scan_counts(&mut run, &scan);
    run.finish(scan.files())
}

fn cmd_detect(a: &DetectArgs) -> Outcome<()> {
    let common = &a.scan.common;
    let mut run = Run::new("detect", &common.out)?;
    let targets = load_target_list(&a.scan.targets, &mut run)?;
    let cfg = load_config(&a.config, &mut run)?;
    let loaded = load_ledger(common, &mut run)?;
    let (scan, detect) = with_threads(common.threads, || -> ctrack::Result<_> {
        let scan = run_scan(&loaded.ledger, &targets)?;
        let detect = run_detect(&loaded.ledger, &scan.confirmed_tokens(), &cfg)?;
        Ok((scan, detect))
    })??;
    scan_counts(&mut run, &scan);
    detect_counts(&mut run, &detect);
    run.finish(detect.files())
}

/// `graph` writes the graph files only; `report` writes every stage plus report.json.
fn cmd_graph(a: &GraphArgs, full: bool) -> Outcome<()> {
    let common = &a.detect.scan.common;
    let mut run = Run::new(if full { "report" } else { "graph" }, &common.out)?;
    if a.max_depth == 0 {
        return Err(Failure::Usage("--max-depth must be at least 1".into()));
    }
    let targets = load_target_list(&a.detect.scan.targets, &mut run)?;
    let cfg = load_config(&a.detect.config, &mut run)?;
    let loaded = load_ledger(common, &mut run)?;
    let ledger = &loaded.ledger;
    let p = with_threads(common.threads, || {
        run_pipeline(ledger, &targets, &cfg, a.max_depth)
    })??;
    scan_counts(&mut run, &p.scan);
    detect_counts(&mut run, &p.detect);
    run.manifest.count(
        "creator_graph_nodes",
        p.graph.creators.nodes.len() + p.graph.creators.creators.len(),
    );
    run.manifest
        .count("holders", p.graph.holders.holder_count());
    run.manifest
        .count("money_flow_nodes", p.graph.money_flow.nodes.len());
    run.manifest
        .count("money_flow_edges", p.graph.money_flow.edges.len());
    run.manifest.count("token_stats_rows", p.graph.stats.len());
    run.finish(if full { p.files() } else { p.graph.files() })
}

fn cmd_synth(a: &SynthArgs) -> Outcome<()> {
    let mut run = Run::new("synth", &a.out)?;
    let path = require(&a.scenario, "--scenario")?;
    let bytes = existing_file(path, "--scenario")?;
    run.manifest.input("--scenario", path);
    run.manifest.digest("scenario", &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Usage(format!("--scenario: {} is not UTF-8", path.display())))?;
    let cfg = ScenarioConfig::from_toml_str(&text)
        .map_err(|e| Failure::Usage(format!("--scenario: {e}")))?;
    let out = generate(&cfg).map_err(|e| Failure::Usage(format!("--scenario: {e}")))?;
    let t = &out.truth.totals;
    run.manifest.count("planted_tokens", out.truth.tokens.len());
    run.manifest
        .count("confirmed_counterfeits", t.confirmed_counterfeits);
    run.manifest.count("airdrop_campaigns", t.airdrop_campaigns);
    run.manifest
        .count("arbitrage_evidences", t.arbitrage_evidences);
    run.manifest.count("targets", out.targets.len());
    run.finish(out.files())
}
