//! JSON Lines ingestion with per-line rejection reporting.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::erc20::detect_erc20;
use super::ledger::IndexedLedger;
use super::records::*;
use crate::error::{Error, Result};
use crate::types::{Address, TxHash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Blocks,
    Transactions,
    InternalTransactions,
    Contracts,
    TokenTransfers,
    TokenMetadata,
}

impl FileKind {
    pub const ALL: [FileKind; 6] = [
        FileKind::Blocks,
        FileKind::Transactions,
        FileKind::InternalTransactions,
        FileKind::Contracts,
        FileKind::TokenTransfers,
        FileKind::TokenMetadata,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            FileKind::Blocks => "blocks.jsonl",
            FileKind::Transactions => "transactions.jsonl",
            FileKind::InternalTransactions => "internal_transactions.jsonl",
            FileKind::Contracts => "contracts.jsonl",
            FileKind::TokenTransfers => "token_transfers.jsonl",
            FileKind::TokenMetadata => "token_metadata.jsonl",
        }
    }
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

pub const LABELS_FILE: &str = "labels.json";

/// Paths of the input files; absent entries are treated as empty inputs.
#[derive(Debug, Clone, Default)]
pub struct LedgerPaths {
    pub files: BTreeMap<FileKind, PathBuf>,
}

impl LedgerPaths {
    /// Picks up whichever of the standard file names exist under `dir`.
    pub fn from_dir(dir: &Path) -> Self {
        let files = FileKind::ALL
            .iter()
            .map(|&k| (k, dir.join(k.file_name())))
            .filter(|(_, p)| p.is_file())
            .collect();
        Self { files }
    }

    pub fn with(mut self, kind: FileKind, path: impl Into<PathBuf>) -> Self {
        self.files.insert(kind, path.into());
        self
    }
}

/// In-memory file contents keyed by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerTexts {
    pub files: BTreeMap<FileKind, Vec<u8>>,
}

impl LedgerTexts {
    pub fn get(&self, kind: FileKind) -> &[u8] {
        self.files.get(&kind).map_or(&[][..], Vec::as_slice)
    }

    pub fn read(paths: &LedgerPaths) -> Result<Self> {
        let files = paths
            .files
            .iter()
            .map(|(&k, p)| {
                std::fs::read(p)
                    .map(|bytes| (k, bytes))
                    .map_err(|source| Error::Io {
                        path: p.clone(),
                        source,
                    })
            })
            .collect::<Result<_>>()?;
        Ok(Self { files })
    }
}

/// One input line that was not indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub file: FileKind,
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines_read: BTreeMap<FileKind, usize>,
    pub accepted: BTreeMap<FileKind, usize>,
    pub rejections: Vec<Rejection>,
    /// Contracts that passed ERC-20 detection but have no metadata line.
    pub erc20_without_metadata: usize,
}

impl IngestReport {
    pub fn rejected(&self) -> usize {
        self.rejections.len()
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub ledger: IndexedLedger,
    pub report: IngestReport,
}

pub fn load_labels(path: &Path) -> Result<LabelSet> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        what: "labels",
        message: e.to_string(),
    })
}

/// Reads every listed file and builds the index. Only unreadable files are fatal.
pub fn ingest(paths: &LedgerPaths, labels: LabelSet) -> Result<Ingested> {
    let texts = LedgerTexts::read(paths)?;
    Ok(ingest_texts(&texts, labels))
}

struct Parsed<T> {
    rows: Vec<(usize, Result<T, String>)>,
    lines: usize,
}

fn parse_lines<R, T>(bytes: &[u8], validate: fn(R) -> Result<T, String>) -> Parsed<T>
where
    R: DeserializeOwned,
    T: Send,
{
    let lines: Vec<(usize, &[u8])> = bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix(b"\r").unwrap_or(l)))
        .filter(|(_, l)| !l.iter().all(u8::is_ascii_whitespace))
        .collect();
    let rows = lines
        .par_iter()
        .map(|&(n, line)| {
            let parsed = serde_json::from_slice::<R>(line)
                .map_err(|e| format!("malformed line: {e}"))
                .and_then(validate);
            (n, parsed)
        })
        .collect::<Vec<_>>();
    Parsed {
        lines: rows.len(),
        rows,
    }
}

fn ok_block(b: Block) -> Result<Block, String> {
    Ok(b)
}

struct Builder {
    report: IngestReport,
}

impl Builder {
    fn reject(&mut self, file: FileKind, line: usize, reason: impl Into<String>) {
        self.report.rejections.push(Rejection {
            file,
            line,
            reason: reason.into(),
        });
    }

    /// Splits parse results into accepted rows and rejection records.
    fn sift<T>(&mut self, file: FileKind, parsed: Parsed<T>) -> Vec<(usize, T)> {
        self.report.lines_read.insert(file, parsed.lines);
        let mut out = Vec::with_capacity(parsed.rows.len());
        for (line, row) in parsed.rows {
            match row {
                Ok(v) => out.push((line, v)),
                Err(reason) => self.reject(file, line, reason),
            }
        }
        out
    }
}

/// Builds the index from in-memory JSON Lines contents.
pub fn ingest_texts(texts: &LedgerTexts, labels: LabelSet) -> Ingested {
    let (blocks, (txs, (internals, (contracts, (transfers, metadata))))) = rayon::join(
        || parse_lines::<Block, _>(texts.get(FileKind::Blocks), ok_block),
        || {
            rayon::join(
                || parse_lines(texts.get(FileKind::Transactions), RawTx::validate),
                || {
                    rayon::join(
                        || {
                            parse_lines(
                                texts.get(FileKind::InternalTransactions),
                                RawInternalTx::validate,
                            )
                        },
                        || {
                            rayon::join(
                                || {
                                    parse_lines(
                                        texts.get(FileKind::Contracts),
                                        RawContract::validate,
                                    )
                                },
                                || {
                                    rayon::join(
                                        || {
                                            parse_lines(
                                                texts.get(FileKind::TokenTransfers),
                                                RawTransfer::validate,
                                            )
                                        },
                                        || {
                                            parse_lines(
                                                texts.get(FileKind::TokenMetadata),
                                                RawTokenMetadata::validate,
                                            )
                                        },
                                    )
                                },
                            )
                        },
                    )
                },
            )
        },
    );

    let mut b = Builder {
        report: IngestReport::default(),
    };
    let mut ledger = IndexedLedger {
        labels,
        ..Default::default()
    };

    // Blocks: unique numbers, timestamps non-decreasing in number order.
    let mut block_rows = b.sift(FileKind::Blocks, blocks);
    let mut seen_blocks = HashSet::new();
    block_rows.retain(|(line, blk)| {
        let fresh = seen_blocks.insert(blk.number);
        if !fresh {
            b.reject(
                FileKind::Blocks,
                *line,
                format!("duplicate block {}", blk.number),
            );
        }
        fresh
    });
    block_rows.sort_by_key(|(line, blk)| (blk.number, *line));
    let mut last_ts = 0u64;
    for (line, blk) in block_rows {
        if blk.timestamp < last_ts {
            b.reject(
                FileKind::Blocks,
                line,
                format!(
                    "block {} timestamp {} precedes an earlier block's timestamp {}",
                    blk.number, blk.timestamp, last_ts
                ),
            );
            continue;
        }
        last_ts = blk.timestamp;
        ledger.blocks.insert(blk.number, blk.timestamp);
    }

    // External transactions: known block, unique hash; stable sort keeps file order
    // within a block.
    let mut tx_rows = b.sift(FileKind::Transactions, txs);
    let mut seen_tx = HashSet::new();
    tx_rows.retain(|(line, tx)| {
        if !ledger.blocks.contains_key(&tx.block) {
            b.reject(
                FileKind::Transactions,
                *line,
                format!("unknown block {}", tx.block),
            );
            return false;
        }
        if !seen_tx.insert(tx.hash) {
            b.reject(
                FileKind::Transactions,
                *line,
                format!("duplicate hash {}", tx.hash),
            );
            return false;
        }
        true
    });
    tx_rows.sort_by_key(|(line, tx)| (tx.block, *line));
    ledger.txs = tx_rows.into_iter().map(|(_, tx)| tx).collect();
    ledger.tx_by_hash = ledger
        .txs
        .iter()
        .enumerate()
        .map(|(i, tx)| (tx.hash, i))
        .collect();
    for (i, tx) in ledger.txs.iter().enumerate() {
        if !tx.status || tx.value_wei.is_zero() {
            continue;
        }
        if let Some(to) = tx.to {
            ledger.eth_in.entry(to).or_default().push(i);
        }
        ledger.eth_out.entry(tx.from).or_default().push(i);
    }

    // Contracts: unique address, known creation block.
    let contract_rows = b.sift(FileKind::Contracts, contracts);
    for (line, c) in contract_rows {
        if !ledger.blocks.contains_key(&c.created_block) {
            b.reject(
                FileKind::Contracts,
                line,
                format!("unknown creation block {}", c.created_block),
            );
            continue;
        }
        if ledger.contracts.contains_key(&c.address) {
            b.reject(
                FileKind::Contracts,
                line,
                format!("duplicate contract {}", c.address),
            );
            continue;
        }
        if detect_erc20(&c.bytecode) {
            ledger.erc20.insert(c.address);
        }
        ledger.contracts.insert(c.address, c);
    }
    let contract_set: BTreeSet<Address> = ledger.contracts.keys().copied().collect();
    for c in ledger.contracts.values_mut() {
        c.created_via_internal = contract_set.contains(&c.creator);
    }

    // Token metadata: only for contracts that passed ERC-20 detection.
    for (line, t) in b.sift(FileKind::TokenMetadata, metadata) {
        let reason = if !ledger.contracts.contains_key(&t.address) {
            Some(format!("no contract record for {}", t.address))
        } else if !ledger.erc20.contains(&t.address) {
            Some(format!("{} does not implement ERC-20", t.address))
        } else if ledger.tokens.contains_key(&t.address) {
            Some(format!("duplicate metadata for {}", t.address))
        } else {
            None
        };
        match reason {
            Some(r) => b.reject(FileKind::TokenMetadata, line, r),
            None => {
                ledger.tokens.insert(t.address, t);
            }
        }
    }
    b.report.erc20_without_metadata = ledger
        .erc20
        .iter()
        .filter(|a| !ledger.tokens.contains_key(a))
        .count();

    // Internal transactions: parent must be indexed, (parent, trace) unique.
    let mut seen_trace = HashSet::new();
    let mut internal_rows = Vec::new();
    for (line, itx) in b.sift(FileKind::InternalTransactions, internals) {
        let Some(&ord) = ledger.tx_by_hash.get(&itx.parent_hash) else {
            b.reject(
                FileKind::InternalTransactions,
                line,
                format!("unknown parent transaction {}", itx.parent_hash),
            );
            continue;
        };
        if !seen_trace.insert((itx.parent_hash, itx.trace_index)) {
            b.reject(
                FileKind::InternalTransactions,
                line,
                format!("duplicate trace {} #{}", itx.parent_hash, itx.trace_index),
            );
            continue;
        }
        internal_rows.push((ord, itx));
    }
    internal_rows.sort_by_key(|(ord, itx)| (*ord, itx.trace_index));
    ledger.internals = internal_rows.into_iter().map(|(_, t)| t).collect();
    ledger.internals_by_parent = group_ranges(&ledger.internals, |t| t.parent_hash);

    // Transfers: known transaction and token, (tx, log index) unique.
    let mut seen_log = HashSet::new();
    let mut transfer_rows = Vec::new();
    for (line, ev) in b.sift(FileKind::TokenTransfers, transfers) {
        let Some(&ord) = ledger.tx_by_hash.get(&ev.tx_hash) else {
            b.reject(
                FileKind::TokenTransfers,
                line,
                format!("unknown transaction {}", ev.tx_hash),
            );
            continue;
        };
        if !ledger.tokens.contains_key(&ev.token) {
            b.reject(
                FileKind::TokenTransfers,
                line,
                format!("no token record for {}", ev.token),
            );
            continue;
        }
        if !seen_log.insert((ev.tx_hash, ev.log_index)) {
            b.reject(
                FileKind::TokenTransfers,
                line,
                format!("duplicate log {} #{}", ev.tx_hash, ev.log_index),
            );
            continue;
        }
        transfer_rows.push((ord, ev));
    }
    transfer_rows.sort_by_key(|(ord, ev)| (*ord, ev.log_index));
    ledger.transfers = transfer_rows.into_iter().map(|(_, t)| t).collect();
    ledger.transfers_by_tx = group_ranges(&ledger.transfers, |t| t.tx_hash);
    for (i, ev) in ledger.transfers.iter().enumerate() {
        ledger
            .transfers_by_token
            .entry(ev.token)
            .or_default()
            .push(i);
    }

    let counts = ledger.counts();
    let accepted = [
        (FileKind::Blocks, counts.blocks),
        (FileKind::Transactions, counts.transactions),
        (FileKind::InternalTransactions, counts.internal_transactions),
        (FileKind::Contracts, counts.contracts),
        (FileKind::TokenTransfers, counts.token_transfers),
        (FileKind::TokenMetadata, counts.tokens),
    ];
    b.report.accepted = accepted.into_iter().collect();
    b.report.rejections.sort_by_key(|r| (r.file, r.line));

    Ingested {
        ledger,
        report: b.report,
    }
}

fn group_ranges<T>(
    items: &[T],
    key: impl Fn(&T) -> TxHash,
) -> HashMap<TxHash, std::ops::Range<usize>> {
    let mut out = HashMap::new();
    let mut start = 0;
    for i in 1..=items.len() {
        if i == items.len() || key(&items[i]) != key(&items[start]) {
            out.insert(key(&items[start]), start..i);
            start = i;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Writers, used by the generator and by tests building fixtures.
// ---------------------------------------------------------------------------

/// Serialises records to the JSON Lines wire format.
#[derive(Debug, Default)]
pub struct LedgerWriter {
    texts: LedgerTexts,
}

impl LedgerWriter {
    fn push<T: Serialize>(&mut self, kind: FileKind, row: &T) {
        let buf = self.texts.files.entry(kind).or_default();
        serde_json::to_writer(&mut *buf, row).expect("in-memory serialisation");
        buf.push(b'\n');
    }

    pub fn block(&mut self, b: &Block) {
        self.push(FileKind::Blocks, b);
    }

    pub fn tx(&mut self, tx: &ExternalTx) {
        self.push(FileKind::Transactions, &RawTx::from_record(tx));
    }

    pub fn internal(&mut self, tx: &InternalTx) {
        self.push(
            FileKind::InternalTransactions,
            &RawInternalTx::from_record(tx),
        );
    }

    pub fn contract(&mut self, c: &ContractRecord) {
        self.push(FileKind::Contracts, &RawContract::from_record(c));
    }

    pub fn transfer(&mut self, t: &TransferEvent) {
        self.push(FileKind::TokenTransfers, &RawTransfer::from_record(t));
    }

    pub fn token(&mut self, t: &TokenRecord) {
        self.push(FileKind::TokenMetadata, &RawTokenMetadata::from_record(t));
    }

    /// Finishes; every kind is present (possibly empty).
    pub fn finish(mut self) -> LedgerTexts {
        for k in FileKind::ALL {
            self.texts.files.entry(k).or_default();
        }
        self.texts
    }
}

/// Writes `texts` under `dir` using the standard file names.
pub fn write_ledger_dir(dir: &Path, texts: &LedgerTexts) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for (k, bytes) in &texts.files {
        let path = dir.join(k.file_name());
        std::fs::write(&path, bytes).map_err(|source| Error::Io { path, source })?;
    }
    Ok(())
}
