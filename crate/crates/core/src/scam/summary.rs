use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{AirdropFinding, ArbitrageEvidence, VictimHistoryStats};
use crate::amount::{self, dec_str};
use crate::chain_store::IndexedLedger;
use crate::types::{Address, TxHash};

/// Distinct addresses per scam role, plus their union.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSets {
    pub token_contracts: BTreeSet<Address>,
    pub token_creators: BTreeSet<Address>,
    pub eth_received: BTreeSet<Address>,
    pub token_distributors: BTreeSet<Address>,
}

impl RoleSets {
    pub fn union(&self) -> BTreeSet<Address> {
        self.token_contracts
            .iter()
            .chain(&self.token_creators)
            .chain(&self.eth_received)
            .chain(&self.token_distributors)
            .copied()
            .collect()
    }

    pub fn counts(&self) -> RoleCounts {
        let per_role = self.token_contracts.len()
            + self.token_creators.len()
            + self.eth_received.len()
            + self.token_distributors.len();
        let distinct = self.union().len();
        RoleCounts {
            token_contracts: self.token_contracts.len(),
            token_creators: self.token_creators.len(),
            eth_received: self.eth_received.len(),
            token_distributors: self.token_distributors.len(),
            distinct_addresses: distinct,
            roles_per_address: if distinct == 0 {
                "0".into()
            } else {
                amount::format_ratio(&ratio(per_role, distinct), 2)
            },
        }
    }
}

fn ratio(a: usize, b: usize) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleCounts {
    pub token_contracts: usize,
    pub token_creators: usize,
    pub eth_received: usize,
    pub token_distributors: usize,
    /// Each address counted once even when it holds several roles.
    pub distinct_addresses: usize,
    /// Sum of per-role counts over distinct addresses, truncated to two decimals.
    pub roles_per_address: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScamTypeSummary {
    pub transactions: usize,
    pub tokens: usize,
    pub victims: usize,
    #[serde(with = "dec_str")]
    pub eth_total_wei: BigUint,
    pub eth_total: String,
    pub usd_total: String,
    pub roles: RoleCounts,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverallSummary {
    pub transactions: usize,
    pub tokens_involved: usize,
    pub scam_addresses: usize,
    pub victims: usize,
    pub victims_in_both: usize,
    #[serde(with = "dec_str")]
    pub eth_total_wei: BigUint,
    pub eth_total: String,
    pub usd_total: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistorySummary {
    pub arbitrage_victims: usize,
    pub secondary_scam_victims: usize,
    pub type2_victims: usize,
    pub type2_sent_again: usize,
    pub type2_repeat_greater: usize,
}

/// Losses, victims and scam-address roles per scam type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScamSummary {
    pub usd_rate: String,
    pub airdrop: ScamTypeSummary,
    pub arbitrage: ScamTypeSummary,
    pub overall: OverallSummary,
    pub history: HistorySummary,
}

/// Role sets for both scam types, derived from the evidence.
pub fn role_sets(
    ledger: &IndexedLedger,
    airdrops: &[AirdropFinding],
    arbitrage: &[ArbitrageEvidence],
) -> (RoleSets, RoleSets) {
    let creator = |t: &Address| ledger.contract(t).map(|c| c.creator);
    let mut air = RoleSets::default();
    for f in airdrops {
        air.token_contracts.insert(f.token);
        air.token_creators.extend(creator(&f.token));
        for e in &f.evidences {
            air.eth_received.insert(e.eth_forward_to);
            air.token_distributors.insert(e.token_distributor);
        }
    }
    let mut arb = RoleSets::default();
    for e in arbitrage {
        arb.token_contracts.insert(e.token);
        arb.token_creators.extend(creator(&e.token));
        arb.eth_received.insert(e.scam_eth_receiver);
        arb.token_distributors.insert(e.token_distributor);
    }
    (air, arb)
}

fn money(wei: &BigUint, usd_rate: &BigRational) -> (String, String) {
    (
        amount::format_units(wei, amount::ETH_DECIMALS),
        amount::format_cents(&amount::wei_to_usd_cents(wei, usd_rate)),
    )
}

/// Folds findings into the summary. Arbitrage ETH counts each payment once even when
/// it explains several token returns.
pub fn aggregate(
    ledger: &IndexedLedger,
    airdrops: &[AirdropFinding],
    arbitrage: &[ArbitrageEvidence],
    history: &VictimHistoryStats,
    usd_rate: &crate::amount::ExactDecimal,
) -> ScamSummary {
    let rate = usd_rate.value();
    let (air_roles, arb_roles) = role_sets(ledger, airdrops, arbitrage);

    let air_victims: BTreeSet<Address> = airdrops
        .iter()
        .flat_map(|f| f.victims.iter().copied())
        .collect();
    let air_wei: BigUint = airdrops.iter().map(|f| &f.eth_total_wei).sum();
    let (air_eth, air_usd) = money(&air_wei, rate);
    let airdrop = ScamTypeSummary {
        transactions: airdrops.iter().map(|f| f.evidences.len()).sum(),
        tokens: air_roles.token_contracts.len(),
        victims: air_victims.len(),
        eth_total_wei: air_wei.clone(),
        eth_total: air_eth,
        usd_total: air_usd,
        roles: air_roles.counts(),
    };

    let arb_victims: BTreeSet<Address> = arbitrage.iter().map(|e| e.victim).collect();
    let mut paid: BTreeSet<TxHash> = BTreeSet::new();
    let mut arb_wei = BigUint::default();
    for e in arbitrage {
        if paid.insert(e.eth_tx) {
            arb_wei += &e.eth_amount_wei;
        }
    }
    let arb_txs: BTreeSet<(TxHash, u32)> = arbitrage
        .iter()
        .map(|e| (e.token_transfer.tx_hash, e.token_transfer.log_index))
        .collect();
    let (arb_eth, arb_usd) = money(&arb_wei, rate);
    let arbitrage_summary = ScamTypeSummary {
        transactions: arb_txs.len(),
        tokens: arb_roles.token_contracts.len(),
        victims: arb_victims.len(),
        eth_total_wei: arb_wei.clone(),
        eth_total: arb_eth,
        usd_total: arb_usd,
        roles: arb_roles.counts(),
    };

    let total_wei = &air_wei + &arb_wei;
    let (eth, usd) = money(&total_wei, rate);
    let overall = OverallSummary {
        transactions: airdrop.transactions + arbitrage_summary.transactions,
        tokens_involved: air_roles
            .token_contracts
            .union(&arb_roles.token_contracts)
            .count(),
        scam_addresses: air_roles.union().union(&arb_roles.union()).count(),
        victims: air_victims.union(&arb_victims).count(),
        victims_in_both: air_victims.intersection(&arb_victims).count(),
        eth_total_wei: total_wei,
        eth_total: eth,
        usd_total: usd,
    };

    ScamSummary {
        usd_rate: usd_rate.as_str().to_string(),
        airdrop,
        arbitrage: arbitrage_summary,
        overall,
        history: HistorySummary {
            arbitrage_victims: history.victim_count,
            secondary_scam_victims: history.secondary_victims,
            type2_victims: history.type2_victims,
            type2_sent_again: history.type2_sent_again,
            type2_repeat_greater: history.type2_repeat_greater,
        },
    }
}
