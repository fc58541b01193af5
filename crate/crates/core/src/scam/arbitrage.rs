//! Arbitrage scams: the victim pays a posted address off-contract and later receives
//! counterfeit tokens from the scammer.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::DetectorConfig;
use crate::amount::dec_str;
use crate::chain_store::{ExternalTx, IndexedLedger, TransferEvent};
use crate::error::{Error, Result};
use crate::types::{Address, TxHash};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferRef {
    pub tx_hash: TxHash,
    pub log_index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArbitrageEvidence {
    pub victim: Address,
    pub eth_tx: TxHash,
    #[serde(with = "dec_str")]
    pub eth_amount_wei: BigUint,
    pub scam_eth_receiver: Address,
    pub token_transfer: TransferRef,
    pub token: Address,
    pub token_distributor: Address,
    pub delta_seconds: u64,
}

/// The receiver's latest qualifying ETH send in `[t - window, t)`; among sends sharing
/// a timestamp the one later in ledger order wins.
pub fn latest_send_before<'a>(
    ledger: &'a IndexedLedger,
    receiver: &Address,
    t: u64,
    cfg: &DetectorConfig,
) -> Option<&'a ExternalTx> {
    if t == 0 {
        return None;
    }
    let start = t.saturating_sub(cfg.window_seconds);
    ledger
        .eth_sends_from(receiver, start, t - 1)
        .expect("start <= t - 1")
        .into_iter()
        .rev()
        .find(|tx| tx.value_wei >= cfg.min_eth_wei)
}

fn evidence_for(
    ledger: &IndexedLedger,
    ev: &TransferEvent,
    cfg: &DetectorConfig,
) -> Option<ArbitrageEvidence> {
    let t = ledger.transfer_timestamp(ev);
    let send = latest_send_before(ledger, &ev.to, t, cfg)?;
    let sent_at = ledger.timestamp_of(send);
    Some(ArbitrageEvidence {
        victim: ev.to,
        eth_tx: send.hash,
        eth_amount_wei: send.value_wei.clone(),
        scam_eth_receiver: send.to.expect("ETH sends have a recipient"),
        token_transfer: TransferRef {
            tx_hash: ev.tx_hash,
            log_index: ev.log_index,
        },
        token: ev.token,
        token_distributor: ev.from,
        delta_seconds: t - sent_at,
    })
}

/// Pairs every transfer of `token` with the receiver's most recent prior ETH send inside
/// the window. Transfers without such a send produce nothing.
pub fn detect_arbitrage(
    ledger: &IndexedLedger,
    token: &Address,
    cfg: &DetectorConfig,
) -> Result<Vec<ArbitrageEvidence>> {
    if ledger.token(token).is_none() {
        return Err(Error::UnknownToken(*token));
    }
    Ok(ledger
        .transfers_of(token)
        .into_iter()
        .filter_map(|ev| evidence_for(ledger, ev, cfg))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_store::LabelSet;
    use crate::fixture::{addr, eth, LedgerBuilder};

    const TOKEN: u64 = 0x70c;
    const DIST: u64 = 0xd15;

    fn base() -> LedgerBuilder {
        let mut b = LedgerBuilder::new();
        let blk = b.at(10);
        let mint = b.deploy_token(
            blk,
            addr(1),
            addr(TOKEN),
            "HuobiToken",
            "HT",
            18,
            eth(1_000_000),
        );
        b.transfer(
            mint,
            0,
            addr(TOKEN),
            crate::Address::ZERO,
            addr(DIST),
            eth(1_000_000),
        );
        b
    }

    fn give(b: &mut LedgerBuilder, t: u64, to: u64) {
        let blk = b.at(t);
        let h = b.send(blk, addr(DIST), addr(TOKEN), BigUint::default());
        b.transfer(h, 0, addr(TOKEN), addr(DIST), addr(to), eth(100));
    }

    #[test]
    fn send_then_return_within_window() {
        let mut b = base();
        let blk = b.at(1_000);
        let send = b.send(blk, addr(0x71c), addr(0x5), eth(3));
        give(&mut b, 2_800, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        let ev = detect_arbitrage(&l, &addr(TOKEN), &DetectorConfig::default()).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].delta_seconds, 1_800);
        assert_eq!(ev[0].scam_eth_receiver, addr(0x5));
        assert_eq!(ev[0].eth_tx, send);
        assert_eq!(ev[0].token_distributor, addr(DIST));
        assert_eq!(ev[0].eth_amount_wei, eth(3));
    }

    #[test]
    fn unmatched_transfer_gives_nothing() {
        let mut b = base();
        give(&mut b, 5_000, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        assert!(
            detect_arbitrage(&l, &addr(TOKEN), &DetectorConfig::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn latest_of_several_sends_is_chosen() {
        let mut b = base();
        let b900 = b.at(900);
        b.send(b900, addr(0x71c), addr(0x5), eth(1));
        let b950 = b.at(950);
        let later = b.send(b950, addr(0x71c), addr(0x6), eth(1));
        give(&mut b, 1_000, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        let ev = detect_arbitrage(&l, &addr(TOKEN), &DetectorConfig::default()).unwrap();
        // oracle: linear scan for the max-timestamp send strictly before t=1000
        let oracle = l
            .transactions()
            .iter()
            .filter(|tx| tx.from == addr(0x71c) && tx.status)
            .filter(|tx| l.tx_timestamp(&tx.hash).unwrap() < 1_000)
            .max_by_key(|tx| l.tx_timestamp(&tx.hash).unwrap())
            .unwrap();
        assert_eq!(ev[0].eth_tx, oracle.hash);
        assert_eq!(ev[0].eth_tx, later);
        assert_eq!(ev[0].delta_seconds, 50);
    }

    #[test]
    fn window_edges() {
        let cfg = DetectorConfig::default();
        // exactly at the window: included
        let mut b = base();
        let blk = b.at(1_000);
        b.send(blk, addr(0x71c), addr(0x5), eth(1));
        give(&mut b, 1_000 + cfg.window_seconds, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        assert_eq!(
            detect_arbitrage(&l, &addr(TOKEN), &cfg).unwrap()[0].delta_seconds,
            7_200
        );
        // one second past: excluded
        let mut b = base();
        let blk = b.at(1_000);
        b.send(blk, addr(0x71c), addr(0x5), eth(1));
        give(&mut b, 1_001 + cfg.window_seconds, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        assert!(detect_arbitrage(&l, &addr(TOKEN), &cfg).unwrap().is_empty());
    }

    #[test]
    fn same_timestamp_send_does_not_count() {
        let mut b = base();
        let blk = b.at(1_000);
        b.send(blk, addr(0x71c), addr(0x5), eth(1));
        give(&mut b, 1_000, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        assert!(
            detect_arbitrage(&l, &addr(TOKEN), &DetectorConfig::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn dust_send_is_skipped_for_earlier_real_send() {
        let mut b = base();
        let b1 = b.at(100);
        let real = b.send(b1, addr(0x71c), addr(0x5), eth(1));
        let b2 = b.at(200);
        b.send(b2, addr(0x71c), addr(0x6), BigUint::from(10u8));
        give(&mut b, 300, 0x71c);
        let l = b.ingest(LabelSet::default()).ledger;
        let ev = detect_arbitrage(&l, &addr(TOKEN), &DetectorConfig::default()).unwrap();
        assert_eq!(ev[0].eth_tx, real);
    }

    #[test]
    fn unknown_token_errors() {
        let l = base().ingest(LabelSet::default()).ledger;
        assert!(detect_arbitrage(&l, &addr(0xbad), &DetectorConfig::default()).is_err());
    }
}
