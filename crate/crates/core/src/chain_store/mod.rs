//! Ledger ingestion and indexing.
//!
//! Exported chain data arrives as JSON Lines files (see [`FileKind`]). [`ingest`] parses
//! them, validates referential integrity, classifies ERC-20 contracts by selector presence
//! and returns an immutable [`IndexedLedger`] together with an [`IngestReport`] listing
//! every line that was not indexed.

mod erc20;
mod ingest;
mod ledger;
mod records;

pub use erc20::{detect_erc20, erc20_stub, missing_selectors, stub_runtime, MANDATORY_SELECTORS};
pub use ingest::{
    ingest, ingest_texts, load_labels, write_ledger_dir, FileKind, IngestReport, Ingested,
    LedgerPaths, LedgerTexts, LedgerWriter, Rejection, LABELS_FILE,
};
pub use ledger::{IndexedLedger, LedgerCounts, TxOrdinal};
pub use records::{
    Block, CallType, ContractRecord, ExternalTx, InternalTx, LabelSet, TokenRecord, TransferEvent,
    MAX_DECIMALS,
};
