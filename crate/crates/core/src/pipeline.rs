//! Stage runners over an indexed ledger and the files each stage emits.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::chain_store::{IndexedLedger, LedgerCounts};
use crate::counterfeit::{
    apply_filters, scan, sorted_targets, validate_targets, CounterfeitCandidate, FilterOutcome,
    FilterVerdict, LexicalTable, TargetToken,
};
use crate::error::{Error, Result};
use crate::graph::{
    build_creator_graph, build_holder_graph, creator_cooccurrence, stats_csv, token_stats_all,
    CooccurrenceMatrix, CreatorGraph, FlowNodeKind, HolderGraph, MoneyFlowGraph, TokenStats,
};
use crate::scam::{
    aggregate, classify_victim_history, detect_all, Detections, DetectorConfig, ScamSummary,
    VictimHistoryStats,
};
use crate::types::Address;

pub const CANDIDATES_FILE: &str = "candidates.jsonl";
pub const AIRDROP_FINDINGS_FILE: &str = "airdrop_findings.jsonl";
pub const ARBITRAGE_EVIDENCE_FILE: &str = "arbitrage_evidence.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CREATOR_GRAPH_FILE: &str = "creator_graph.json";
pub const COOCCURRENCE_FILE: &str = "cooccurrence.json";
pub const HOLDER_GRAPH_FILE: &str = "holder_graph.json";
pub const MONEY_FLOW_FILE: &str = "money_flow.json";
pub const TOKEN_STATS_FILE: &str = "token_stats.csv";
pub const REPORT_FILE: &str = "report.json";

/// Output files by name.
pub type Files = BTreeMap<String, Vec<u8>>;

/// Pretty JSON with a trailing newline.
pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s.into_bytes()
}

/// One compact JSON document per line.
pub fn jsonl_bytes<T: Serialize>(items: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item).expect("value serializes");
        out.push(b'\n');
    }
    out
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool when `None`.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("thread count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    /// Every candidate with its verdict, ordered by target rank then token.
    pub candidates: Vec<CounterfeitCandidate>,
    pub outcome: FilterOutcome,
}

impl ScanOutput {
    pub fn confirmed_tokens(&self) -> BTreeSet<Address> {
        self.outcome.confirmed_tokens()
    }

    pub fn files(&self) -> Files {
        let mut out = Files::new();
        out.insert(CANDIDATES_FILE.into(), jsonl_bytes(&self.candidates));
        out
    }
}

/// Validates the targets, scans the ledger and applies the filter rules.
pub fn run_scan(ledger: &IndexedLedger, targets: &[TargetToken]) -> Result<ScanOutput> {
    validate_targets(targets, ledger.labels())?;
    let outcome = apply_filters(&scan(ledger, targets), ledger.labels());
    Ok(ScanOutput {
        candidates: outcome.all(),
        outcome,
    })
}

#[derive(Debug, Clone)]
pub struct DetectOutput {
    pub detections: Detections,
    pub history: VictimHistoryStats,
    pub summary: ScamSummary,
}

impl DetectOutput {
    pub fn files(&self) -> Files {
        let mut out = Files::new();
        out.insert(
            AIRDROP_FINDINGS_FILE.into(),
            jsonl_bytes(&self.detections.airdrops),
        );
        out.insert(
            ARBITRAGE_EVIDENCE_FILE.into(),
            jsonl_bytes(&self.detections.arbitrage),
        );
        out.insert(SUMMARY_FILE.into(), json_bytes(&self.summary));
        out
    }
}

/// Scam detection over the confirmed counterfeits, victim history and the loss summary.
pub fn run_detect(
    ledger: &IndexedLedger,
    confirmed: &BTreeSet<Address>,
    cfg: &DetectorConfig,
) -> Result<DetectOutput> {
    cfg.validate()?;
    let detections = detect_all(ledger, confirmed, cfg)?;
    let history = classify_victim_history(
        ledger,
        &detections.arbitrage,
        &ledger.labels().official_token_allowlist,
    );
    let summary = aggregate(
        ledger,
        &detections.airdrops,
        &detections.arbitrage,
        &history,
        &cfg.usd_rate,
    );
    Ok(DetectOutput {
        detections,
        history,
        summary,
    })
}

#[derive(Debug, Clone)]
pub struct GraphOutput {
    pub creators: CreatorGraph,
    pub cooccurrence: CooccurrenceMatrix,
    pub holders: HolderGraph,
    pub stats: Vec<TokenStats>,
    pub money_flow: MoneyFlowGraph,
}

impl GraphOutput {
    pub fn files(&self) -> Files {
        let mut out = Files::new();
        out.insert(
            CREATOR_GRAPH_FILE.into(),
            json_bytes(&self.creators.to_json()),
        );
        out.insert(COOCCURRENCE_FILE.into(), json_bytes(&self.cooccurrence));
        out.insert(
            HOLDER_GRAPH_FILE.into(),
            json_bytes(&self.holders.to_json()),
        );
        out.insert(
            MONEY_FLOW_FILE.into(),
            json_bytes(&self.money_flow.to_json()),
        );
        out.insert(TOKEN_STATS_FILE.into(), stats_csv(&self.stats).into_bytes());
        out
    }
}

/// Creator, holder and money-flow graphs plus per-token stats for the confirmed
/// counterfeits; money flow starts at every detected scam address.
pub fn run_graph(
    ledger: &IndexedLedger,
    targets: &[TargetToken],
    scan: &ScanOutput,
    detect: &DetectOutput,
    max_depth: u32,
) -> Result<GraphOutput> {
    let confirmed = &scan.outcome.confirmed;
    let creators = build_creator_graph(ledger, confirmed);
    let cooccurrence = creator_cooccurrence(&creators, targets);
    let holders = build_holder_graph(ledger, confirmed);
    let stats = token_stats_all(ledger, &scan.confirmed_tokens())?;
    let money_flow = crate::graph::trace_money_flow(
        ledger,
        &detect.detections.scam_addresses(),
        ledger.labels(),
        max_depth,
    )?;
    Ok(GraphOutput {
        creators,
        cooccurrence,
        holders,
        stats,
        money_flow,
    })
}

/// Every stage over one ledger.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub ledger: LedgerCounts,
    pub targets: Vec<TargetToken>,
    pub scan: ScanOutput,
    pub detect: DetectOutput,
    pub graph: GraphOutput,
}

pub fn run_pipeline(
    ledger: &IndexedLedger,
    targets: &[TargetToken],
    cfg: &DetectorConfig,
    max_depth: u32,
) -> Result<PipelineOutput> {
    let scan = run_scan(ledger, targets)?;
    let detect = run_detect(ledger, &scan.confirmed_tokens(), cfg)?;
    let graph = run_graph(ledger, targets, &scan, &detect, max_depth)?;
    Ok(PipelineOutput {
        ledger: ledger.counts(),
        targets: sorted_targets(targets),
        scan,
        detect,
        graph,
    })
}

impl PipelineOutput {
    pub fn report(&self) -> Report {
        Report::build(self)
    }

    /// Every stage's files plus the merged report.
    pub fn files(&self) -> Files {
        let mut out = self.scan.files();
        out.extend(self.detect.files());
        out.extend(self.graph.files());
        out.insert(REPORT_FILE.into(), json_bytes(&self.report()));
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub candidates: usize,
    pub confirmed: usize,
    pub filtered_rule1: usize,
    pub filtered_rule2: usize,
    pub filtered_rule3: usize,
    pub needs_review: usize,
}

/// Counterfeits and their transfer volume for one target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetRow {
    pub cap_rank: u32,
    pub name: String,
    pub symbol: String,
    pub address: Address,
    pub counterfeits: usize,
    pub transactions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PopularitySummary {
    pub tokens: usize,
    pub never_transferred: usize,
    pub at_most_two_holders: usize,
    pub max_active_days: u64,
    pub inconsistent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CreatorRow {
    pub creator: Address,
    pub tokens: usize,
    pub targets: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRow {
    pub a: String,
    pub b: String,
    pub shared_creators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CreatorSummary {
    pub creators: usize,
    pub contract_created_tokens: usize,
    pub top_creators: Vec<CreatorRow>,
    pub top_target_pairs: Vec<PairRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoneyFlowSummary {
    pub max_depth: u32,
    pub nodes: BTreeMap<String, usize>,
    pub edges: usize,
    pub wei_into_exchanges: String,
}

/// Everything merged: target table, lexical breakdown, scam losses and graph digests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub ledger: LedgerCounts,
    pub verdicts: VerdictCounts,
    pub targets: Vec<TargetRow>,
    pub lexical: LexicalTable,
    pub scams: ScamSummary,
    pub popularity: PopularitySummary,
    pub creators: CreatorSummary,
    pub money_flow: MoneyFlowSummary,
}

const TOP_N: usize = 10;

impl Report {
    pub fn build(p: &PipelineOutput) -> Self {
        let mut verdicts = VerdictCounts {
            candidates: p.scan.candidates.len(),
            ..Default::default()
        };
        for c in &p.scan.candidates {
            match c.filter_verdict {
                Some(FilterVerdict::Confirmed) => verdicts.confirmed += 1,
                Some(FilterVerdict::FilteredRule1) => verdicts.filtered_rule1 += 1,
                Some(FilterVerdict::FilteredRule2) => verdicts.filtered_rule2 += 1,
                Some(FilterVerdict::FilteredRule3) => verdicts.filtered_rule3 += 1,
                Some(FilterVerdict::NeedsReview) | None => verdicts.needs_review += 1,
            }
        }

        let tx_count: BTreeMap<Address, usize> = p
            .graph
            .stats
            .iter()
            .map(|s| (s.token, s.tx_count))
            .collect();
        let targets = p
            .targets
            .iter()
            .map(|t| {
                let tokens: BTreeSet<Address> = p
                    .scan
                    .outcome
                    .confirmed
                    .iter()
                    .filter(|c| c.target.address == t.address)
                    .map(|c| c.token)
                    .collect();
                TargetRow {
                    cap_rank: t.cap_rank,
                    name: t.name.clone(),
                    symbol: t.symbol.clone(),
                    address: t.address,
                    counterfeits: tokens.len(),
                    transactions: tokens
                        .iter()
                        .map(|a| tx_count.get(a).copied().unwrap_or(0))
                        .sum(),
                }
            })
            .collect();

        let stats = &p.graph.stats;
        let popularity = PopularitySummary {
            tokens: stats.len(),
            never_transferred: stats.iter().filter(|s| s.tx_count == 0).count(),
            at_most_two_holders: stats.iter().filter(|s| s.holder_count <= 2).count(),
            max_active_days: stats.iter().map(|s| s.active_days).max().unwrap_or(0),
            inconsistent: stats.iter().filter(|s| s.inconsistent).count(),
        };

        let g = &p.graph.creators;
        let creators = CreatorSummary {
            creators: g.creators.len(),
            contract_created_tokens: g.contract_created_tokens,
            top_creators: g
                .top_creators(TOP_N)
                .into_iter()
                .map(|(creator, prof)| CreatorRow {
                    creator,
                    tokens: prof.token_count(),
                    targets: prof.target_count(),
                })
                .collect(),
            top_target_pairs: p
                .graph
                .cooccurrence
                .top_pairs(TOP_N)
                .into_iter()
                .map(|(a, b, n)| PairRow {
                    a: a.symbol.clone(),
                    b: b.symbol.clone(),
                    shared_creators: n,
                })
                .collect(),
        };

        let mf = &p.graph.money_flow;
        let mut nodes = BTreeMap::new();
        for kind in [
            FlowNodeKind::Scam,
            FlowNodeKind::FundTransfer,
            FlowNodeKind::Exchange,
            FlowNodeKind::Frontier,
        ] {
            nodes.insert(kind.as_str().to_string(), mf.nodes_of(kind).count());
        }
        let money_flow = MoneyFlowSummary {
            max_depth: mf.max_depth,
            nodes,
            edges: mf.edges.len(),
            wei_into_exchanges: mf.wei_into_exchanges().to_string(),
        };

        Report {
            ledger: p.ledger,
            verdicts,
            targets,
            lexical: LexicalTable::tally(&p.scan.outcome.confirmed),
            scams: p.detect.summary.clone(),
            popularity,
            creators,
            money_flow,
        }
    }
}
