//! Per-victim history across arbitrage campaigns: repeated payments (secondary scams)
//! and the "official tokens first" lure.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::ArbitrageEvidence;
use crate::amount::dec_str;
use crate::chain_store::{IndexedLedger, TxOrdinal};
use crate::types::Address;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VictimHistory {
    pub victim: Address,
    /// Distinct ETH sends from the victim to any identified scam ETH receiver.
    pub scam_sends: usize,
    #[serde(with = "dec_str")]
    pub scam_sent_wei: BigUint,
    /// Received an official token from a scam-side address.
    pub type2: bool,
    /// Paid a scam receiver again after the first official-token receipt.
    pub sent_again_after_official: bool,
    /// That repeat payment was larger than the victim's first scam payment.
    pub repeat_exceeds_first: bool,
}

impl VictimHistory {
    pub fn is_secondary(&self) -> bool {
        self.scam_sends > 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VictimHistoryStats {
    pub victims: Vec<VictimHistory>,
    pub victim_count: usize,
    pub secondary_victims: usize,
    pub type2_victims: usize,
    pub type2_sent_again: usize,
    pub type2_repeat_greater: usize,
}

impl VictimHistoryStats {
    pub fn get(&self, victim: &Address) -> Option<&VictimHistory> {
        self.victims
            .binary_search_by(|v| v.victim.cmp(victim))
            .ok()
            .map(|i| &self.victims[i])
    }
}

pub fn classify_victim_history(
    ledger: &IndexedLedger,
    evidences: &[ArbitrageEvidence],
    official_tokens: &BTreeSet<Address>,
) -> VictimHistoryStats {
    let receivers: BTreeSet<Address> = evidences.iter().map(|e| e.scam_eth_receiver).collect();
    let scam_side: BTreeSet<Address> = receivers
        .iter()
        .copied()
        .chain(evidences.iter().map(|e| e.token_distributor))
        .collect();
    let victims: BTreeSet<Address> = evidences.iter().map(|e| e.victim).collect();

    // first official-token receipt from a scam-side address, per victim
    let mut first_official: BTreeMap<Address, TxOrdinal> = BTreeMap::new();
    for token in official_tokens {
        for ev in ledger.transfers_of(token) {
            if !victims.contains(&ev.to) || !scam_side.contains(&ev.from) {
                continue;
            }
            let ord = ledger.tx_ordinal(&ev.tx_hash).expect("indexed");
            first_official
                .entry(ev.to)
                .and_modify(|o| *o = (*o).min(ord))
                .or_insert(ord);
        }
    }

    let mut stats = VictimHistoryStats::default();
    for victim in victims {
        let sends: Vec<_> = ledger
            .all_eth_sends_from(&victim)
            .into_iter()
            .filter(|tx| tx.to.is_some_and(|to| receivers.contains(&to)))
            .collect();
        let mut h = VictimHistory {
            victim,
            scam_sends: sends.len(),
            scam_sent_wei: sends.iter().map(|tx| &tx.value_wei).sum(),
            type2: false,
            sent_again_after_official: false,
            repeat_exceeds_first: false,
        };
        if let Some(&receipt) = first_official.get(&victim) {
            h.type2 = true;
            let repeat = sends
                .iter()
                .find(|tx| ledger.tx_ordinal(&tx.hash).expect("indexed") > receipt);
            if let (Some(repeat), Some(first)) = (repeat, sends.first()) {
                h.sent_again_after_official = true;
                h.repeat_exceeds_first = repeat.value_wei > first.value_wei;
            }
        }
        stats.secondary_victims += h.is_secondary() as usize;
        stats.type2_victims += h.type2 as usize;
        stats.type2_sent_again += h.sent_again_after_official as usize;
        stats.type2_repeat_greater += h.repeat_exceeds_first as usize;
        stats.victims.push(h);
    }
    stats.victim_count = stats.victims.len();
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_store::LabelSet;
    use crate::fixture::{addr, eth, LedgerBuilder};
    use crate::scam::{detect_arbitrage, DetectorConfig};

    const FAKE: u64 = 0xfa4e;
    const OFFICIAL: u64 = 0x0ff;
    const SCAM: u64 = 0x5ca;
    const VICTIM: u64 = 0x71c;

    fn setup() -> LedgerBuilder {
        let mut b = LedgerBuilder::new();
        let blk = b.at(10);
        let m1 = b.deploy_token(
            blk,
            addr(1),
            addr(FAKE),
            "HuobiToken",
            "HT",
            18,
            eth(1_000_000),
        );
        b.transfer(
            m1,
            0,
            addr(FAKE),
            crate::Address::ZERO,
            addr(SCAM),
            eth(1_000_000),
        );
        let m2 = b.deploy_token(
            blk,
            addr(2),
            addr(OFFICIAL),
            "HuobiToken",
            "HT",
            18,
            eth(1_000_000),
        );
        b.transfer(
            m2,
            0,
            addr(OFFICIAL),
            crate::Address::ZERO,
            addr(SCAM),
            eth(1_000_000),
        );
        b
    }

    fn round(b: &mut LedgerBuilder, t: u64, wei: BigUint, token: u64) {
        let blk = b.at(t);
        b.send(blk, addr(VICTIM), addr(SCAM), wei);
        let blk = b.at(t + 600);
        let h = b.send(blk, addr(SCAM), addr(token), BigUint::default());
        b.transfer(h, 0, addr(token), addr(SCAM), addr(VICTIM), eth(55));
    }

    fn run(b: LedgerBuilder) -> VictimHistoryStats {
        let l = b.ingest(LabelSet::default()).ledger;
        let ev = detect_arbitrage(&l, &addr(FAKE), &DetectorConfig::default()).unwrap();
        classify_victim_history(&l, &ev, &[addr(OFFICIAL)].into())
    }

    #[test]
    fn nineteen_sends_to_one_scam_address() {
        let mut b = setup();
        for i in 0..19 {
            round(&mut b, 1_000 + i * 10_000, eth(1), FAKE);
        }
        let s = run(b);
        assert_eq!(s.get(&addr(VICTIM)).unwrap().scam_sends, 19);
        assert_eq!(s.secondary_victims, 1);
    }

    #[test]
    fn single_send_is_not_secondary() {
        let mut b = setup();
        round(&mut b, 1_000, eth(1), FAKE);
        let s = run(b);
        assert_eq!(s.victim_count, 1);
        assert_eq!(s.secondary_victims, 0);
        assert!(!s.victims[0].type2);
    }

    #[test]
    fn official_first_then_larger_payment() {
        let mut b = setup();
        round(&mut b, 1_000, eth(1), OFFICIAL);
        // 115.18 ETH one hour later, answered with counterfeits
        round(&mut b, 1_000 + 3_600, eth(11_518) / 100u32, FAKE);
        let s = run(b);
        let h = s.get(&addr(VICTIM)).unwrap();
        assert!(h.type2);
        assert!(h.sent_again_after_official);
        assert!(h.repeat_exceeds_first);
        assert_eq!(h.scam_sends, 2);
        assert_eq!(
            (s.type2_victims, s.type2_sent_again, s.type2_repeat_greater),
            (1, 1, 1)
        );
    }

    #[test]
    fn smaller_repeat_is_not_greater() {
        let mut b = setup();
        round(&mut b, 1_000, eth(2), OFFICIAL);
        round(&mut b, 10_000, eth(1), FAKE);
        let s = run(b);
        let h = s.get(&addr(VICTIM)).unwrap();
        assert!(h.type2 && h.sent_again_after_official && !h.repeat_exceeds_first);
    }
}
