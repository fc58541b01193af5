use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Range, RangeInclusive};

use num_traits::Zero;
use serde::Serialize;

use super::records::*;
use crate::error::{Error, Result};
use crate::types::{Address, TxHash};

/// Immutable, query-ready view of one exported ledger.
///
/// External transactions are kept in `(block, position-in-block)` order, which is also
/// time order because block timestamps are validated as non-decreasing. Internal
/// transactions and transfer events are grouped by their enclosing transaction in the
/// same order.
#[derive(Debug, Default)]
pub struct IndexedLedger {
    pub(super) blocks: BTreeMap<u64, u64>,
    pub(super) txs: Vec<ExternalTx>,
    pub(super) tx_by_hash: HashMap<TxHash, usize>,
    pub(super) internals: Vec<InternalTx>,
    pub(super) internals_by_parent: HashMap<TxHash, Range<usize>>,
    pub(super) contracts: BTreeMap<Address, ContractRecord>,
    pub(super) erc20: BTreeSet<Address>,
    pub(super) tokens: BTreeMap<Address, TokenRecord>,
    pub(super) transfers: Vec<TransferEvent>,
    pub(super) transfers_by_tx: HashMap<TxHash, Range<usize>>,
    pub(super) transfers_by_token: HashMap<Address, Vec<usize>>,
    pub(super) eth_in: HashMap<Address, Vec<usize>>,
    pub(super) eth_out: HashMap<Address, Vec<usize>>,
    pub(super) labels: LabelSet,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LedgerCounts {
    pub blocks: usize,
    pub transactions: usize,
    pub internal_transactions: usize,
    pub contracts: usize,
    pub erc20_contracts: usize,
    pub tokens: usize,
    pub token_transfers: usize,
}

/// Position of a transaction in ledger order; comparable across the whole ledger.
pub type TxOrdinal = usize;

impl IndexedLedger {
    pub fn counts(&self) -> LedgerCounts {
        LedgerCounts {
            blocks: self.blocks.len(),
            transactions: self.txs.len(),
            internal_transactions: self.internals.len(),
            contracts: self.contracts.len(),
            erc20_contracts: self.erc20.len(),
            tokens: self.tokens.len(),
            token_transfers: self.transfers.len(),
        }
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn block_timestamp(&self, number: u64) -> Option<u64> {
        self.blocks.get(&number).copied()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.blocks
            .iter()
            .map(|(&number, &timestamp)| Block { number, timestamp })
    }

    pub fn transactions(&self) -> &[ExternalTx] {
        &self.txs
    }

    pub fn tx(&self, hash: &TxHash) -> Option<&ExternalTx> {
        self.tx_by_hash.get(hash).map(|&i| &self.txs[i])
    }

    pub fn tx_ordinal(&self, hash: &TxHash) -> Option<TxOrdinal> {
        self.tx_by_hash.get(hash).copied()
    }

    /// Timestamp of a transaction, resolved through its block.
    pub fn tx_timestamp(&self, hash: &TxHash) -> Option<u64> {
        self.tx(hash).and_then(|tx| self.block_timestamp(tx.block))
    }

    pub(crate) fn timestamp_of(&self, tx: &ExternalTx) -> u64 {
        self.blocks[&tx.block]
    }

    /// External transactions whose block number falls in `range`, in ledger order.
    pub fn txs_in_blocks(&self, range: RangeInclusive<u64>) -> &[ExternalTx] {
        let lo = self.txs.partition_point(|t| t.block < *range.start());
        let hi = self.txs.partition_point(|t| t.block <= *range.end());
        &self.txs[lo..hi.max(lo)]
    }

    pub fn internal_transactions(&self) -> &[InternalTx] {
        &self.internals
    }

    /// Internal transactions of one external transaction, by trace index.
    pub fn internal_txs_of(&self, parent: &TxHash) -> &[InternalTx] {
        self.internals_by_parent
            .get(parent)
            .map_or(&[][..], |r| &self.internals[r.clone()])
    }

    pub fn contract(&self, address: &Address) -> Option<&ContractRecord> {
        self.contracts.get(address)
    }

    pub fn contracts(&self) -> impl Iterator<Item = &ContractRecord> {
        self.contracts.values()
    }

    pub fn is_contract(&self, address: &Address) -> bool {
        self.contracts.contains_key(address)
    }

    pub fn is_erc20(&self, address: &Address) -> bool {
        self.erc20.contains(address)
    }

    pub fn token(&self, address: &Address) -> Option<&TokenRecord> {
        self.tokens.get(address)
    }

    /// ERC-20 tokens with metadata, ordered by address.
    pub fn tokens(&self) -> impl Iterator<Item = &TokenRecord> {
        self.tokens.values()
    }

    pub fn token_transfers(&self) -> &[TransferEvent] {
        &self.transfers
    }

    /// Transfer events emitted inside one transaction, by log index.
    pub fn transfers_in_tx(&self, hash: &TxHash) -> &[TransferEvent] {
        self.transfers_by_tx
            .get(hash)
            .map_or(&[][..], |r| &self.transfers[r.clone()])
    }

    /// All transfers of `token` ordered by (block, tx position, log index).
    /// Unknown tokens yield an empty list.
    pub fn transfers_of(&self, token: &Address) -> Vec<&TransferEvent> {
        self.transfers_by_token
            .get(token)
            .map(|ix| ix.iter().map(|&i| &self.transfers[i]).collect())
            .unwrap_or_default()
    }

    pub fn transfer_count(&self, token: &Address) -> usize {
        self.transfers_by_token.get(token).map_or(0, Vec::len)
    }

    pub fn transfer_timestamp(&self, ev: &TransferEvent) -> u64 {
        self.tx_timestamp(&ev.tx_hash)
            .expect("transfer events reference indexed transactions")
    }

    /// Successful, non-zero-value external transactions to `recipient` with timestamps in
    /// the closed interval `[t_start, t_end]`, in time order.
    pub fn eth_sends_to(
        &self,
        recipient: &Address,
        t_start: u64,
        t_end: u64,
    ) -> Result<Vec<&ExternalTx>> {
        self.eth_window(self.eth_in.get(recipient), t_start, t_end)
    }

    /// Same as [`eth_sends_to`](Self::eth_sends_to) but keyed by sender.
    pub fn eth_sends_from(
        &self,
        sender: &Address,
        t_start: u64,
        t_end: u64,
    ) -> Result<Vec<&ExternalTx>> {
        self.eth_window(self.eth_out.get(sender), t_start, t_end)
    }

    /// Every successful non-zero ETH send from `sender`, in time order.
    pub fn all_eth_sends_from(&self, sender: &Address) -> Vec<&ExternalTx> {
        self.eth_out
            .get(sender)
            .map(|ix| ix.iter().map(|&i| &self.txs[i]).collect())
            .unwrap_or_default()
    }

    fn eth_window(
        &self,
        index: Option<&Vec<usize>>,
        t_start: u64,
        t_end: u64,
    ) -> Result<Vec<&ExternalTx>> {
        if t_start > t_end {
            return Err(Error::InvertedRange {
                start: t_start,
                end: t_end,
            });
        }
        let Some(ix) = index else {
            return Ok(Vec::new());
        };
        let ts = |i: usize| self.timestamp_of(&self.txs[i]);
        let lo = ix.partition_point(|&i| ts(i) < t_start);
        let hi = ix.partition_point(|&i| ts(i) <= t_end);
        Ok(ix[lo..hi.max(lo)].iter().map(|&i| &self.txs[i]).collect())
    }

    /// Value-carrying edges: successful external transfers and internal transfers inside
    /// successful transactions, each with non-zero value.
    pub fn value_edges(&self) -> impl Iterator<Item = (Address, Address, &num_bigint::BigUint)> {
        let external = self.txs.iter().filter_map(|tx| match tx.to {
            Some(to) if tx.status && !tx.value_wei.is_zero() => Some((tx.from, to, &tx.value_wei)),
            _ => None,
        });
        let internal = self.internals.iter().filter_map(move |itx| {
            let ok = self.tx(&itx.parent_hash).is_some_and(|p| p.status);
            (ok && !itx.value_wei.is_zero()).then_some((itx.from, itx.to, &itx.value_wei))
        });
        external.chain(internal)
    }
}
