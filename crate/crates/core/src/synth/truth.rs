use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::amount::dec_str;
use crate::counterfeit::{FilterVerdict, MatchClass};
use crate::types::{Address, TxHash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScamKind {
    Airdrop,
    Arbitrage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedToken {
    pub token: Address,
    pub target: Address,
    pub target_symbol: String,
    pub name: String,
    pub symbol: String,
    pub intended: MatchClass,
    pub verdict: FilterVerdict,
    pub creator: Address,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factory: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scam: Option<ScamKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedAirdrop {
    pub token: Address,
    pub target_symbol: String,
    pub rate: String,
    pub decimals: u8,
    pub creator: Address,
    /// Receives the forwarded ETH and distributes the tokens.
    pub scam_wallet: Address,
    pub victims: Vec<Address>,
    pub evidence_txs: Vec<TxHash>,
    #[serde(with = "dec_str")]
    pub eth_total_wei: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VictimKind {
    Plain,
    Secondary,
    Type2,
    NoReturn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedReturn {
    pub tx: TxHash,
    pub log_index: u32,
    /// Official tokens rather than counterfeits.
    pub official: bool,
    pub delta_seconds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedRound {
    pub eth_tx: TxHash,
    #[serde(with = "dec_str")]
    pub eth_wei: BigUint,
    pub returned: Option<PlantedReturn>,
}

impl PlantedRound {
    /// The round should surface as arbitrage evidence.
    pub fn detectable(&self) -> bool {
        self.returned.as_ref().is_some_and(|r| !r.official)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedVictim {
    pub victim: Address,
    pub kind: VictimKind,
    pub rounds: Vec<PlantedRound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedArbitrage {
    pub token: Address,
    pub target_symbol: String,
    pub creator: Address,
    pub eth_receiver: Address,
    pub distributor: Address,
    pub victims: Vec<PlantedVictim>,
    #[serde(with = "dec_str")]
    pub detectable_eth_wei: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunderingPath {
    pub source: Address,
    pub hops: Vec<Address>,
    pub exchange: Address,
    #[serde(with = "dec_str")]
    pub amount_wei: BigUint,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTotals {
    pub confirmed_counterfeits: usize,
    pub airdrop_campaigns: usize,
    pub airdrop_victims: usize,
    #[serde(with = "dec_str")]
    pub airdrop_eth_wei: BigUint,
    pub arbitrage_evidences: usize,
    pub arbitrage_victims: usize,
    #[serde(with = "dec_str")]
    pub arbitrage_eth_wei: BigUint,
    /// Paid but never received anything; invisible to the detector.
    pub undetectable_victims: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub exchanges: BTreeSet<Address>,
    pub tokens: Vec<PlantedToken>,
    pub airdrops: Vec<PlantedAirdrop>,
    pub arbitrage: Vec<PlantedArbitrage>,
    pub laundering: Vec<LaunderingPath>,
    pub totals: ExpectedTotals,
}

impl GroundTruth {
    pub fn confirmed_tokens(&self) -> BTreeSet<Address> {
        self.tokens
            .iter()
            .filter(|t| t.verdict == FilterVerdict::Confirmed)
            .map(|t| t.token)
            .collect()
    }

    pub fn airdrop_tokens(&self) -> BTreeSet<Address> {
        self.airdrops.iter().map(|a| a.token).collect()
    }

    /// Victims whose payments were never answered.
    pub fn no_return_victims(&self) -> BTreeSet<Address> {
        self.arbitrage
            .iter()
            .flat_map(|c| &c.victims)
            .filter(|v| v.kind == VictimKind::NoReturn)
            .map(|v| v.victim)
            .collect()
    }

    /// (transfer tx, log index, ETH tx) for every round the detector should report.
    pub fn expected_arbitrage_evidence(&self) -> BTreeSet<(TxHash, u32, TxHash)> {
        self.arbitrage
            .iter()
            .flat_map(|c| &c.victims)
            .flat_map(|v| &v.rounds)
            .filter(|r| r.detectable())
            .map(|r| {
                let ret = r.returned.as_ref().expect("detectable rounds return");
                (ret.tx, ret.log_index, r.eth_tx)
            })
            .collect()
    }

    pub fn scam_receivers(&self) -> BTreeSet<Address> {
        self.airdrops
            .iter()
            .map(|a| a.scam_wallet)
            .chain(self.arbitrage.iter().map(|c| c.eth_receiver))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serializes")
    }
}
