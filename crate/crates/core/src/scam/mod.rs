//! Scam detection over confirmed counterfeit tokens.
//!
//! Airdrop detection runs first; tokens with an airdrop finding are not scanned for
//! arbitrage. [`detect_all`] runs both per token in parallel and returns results in
//! token-address order.

mod airdrop;
mod arbitrage;
mod config;
mod history;
mod summary;

use std::collections::BTreeSet;

use rayon::prelude::*;

pub use airdrop::{
    decimals_adjusted_rate, detect_airdrop, median, rates_agree, AirdropEvidence, AirdropFinding,
    Rate,
};
pub use arbitrage::{detect_arbitrage, latest_send_before, ArbitrageEvidence, TransferRef};
pub use config::DetectorConfig;
pub use history::{classify_victim_history, VictimHistory, VictimHistoryStats};
pub use summary::{
    aggregate, role_sets, HistorySummary, OverallSummary, RoleCounts, RoleSets, ScamSummary,
    ScamTypeSummary,
};

use crate::chain_store::IndexedLedger;
use crate::error::Result;
use crate::types::Address;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Detections {
    pub airdrops: Vec<AirdropFinding>,
    pub arbitrage: Vec<ArbitrageEvidence>,
}

impl Detections {
    /// Every address acting as scam ETH receiver or token distributor.
    pub fn scam_addresses(&self) -> BTreeSet<Address> {
        let mut out = BTreeSet::new();
        for f in &self.airdrops {
            for e in &f.evidences {
                out.insert(e.eth_forward_to);
                out.insert(e.token_distributor);
            }
        }
        for e in &self.arbitrage {
            out.insert(e.scam_eth_receiver);
            out.insert(e.token_distributor);
        }
        out
    }
}

/// Runs both detectors over `tokens`, airdrop first.
pub fn detect_all(
    ledger: &IndexedLedger,
    tokens: &BTreeSet<Address>,
    cfg: &DetectorConfig,
) -> Result<Detections> {
    let tokens: Vec<Address> = tokens.iter().copied().collect();
    let per_token: Vec<(Option<AirdropFinding>, Vec<ArbitrageEvidence>)> = tokens
        .par_iter()
        .map(|t| {
            let air = detect_airdrop(ledger, t, cfg)?;
            let arb = match air {
                Some(_) => Vec::new(),
                None => detect_arbitrage(ledger, t, cfg)?,
            };
            Ok((air, arb))
        })
        .collect::<Result<_>>()?;
    let mut out = Detections::default();
    for (air, arb) in per_token {
        out.airdrops.extend(air);
        out.arbitrage.extend(arb);
    }
    Ok(out)
}
