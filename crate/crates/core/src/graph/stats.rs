use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::json::{GraphJson, JsonEdge, JsonNode};
use crate::amount::dec_str;
use crate::chain_store::IndexedLedger;
use crate::counterfeit::CounterfeitCandidate;
use crate::error::{Error, Result};
use crate::types::Address;

pub const SECONDS_PER_DAY: u64 = 86_400;

pub const STATS_CSV_HEADER: &str =
    "token,tx_count,first_ts,last_ts,active_days,holders,total_supply_raw";

/// Balances after replaying every transfer of one token in ledger order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BalanceReplay {
    pub balances: BTreeMap<Address, BigInt>,
    pub minted: BigUint,
    pub burned: BigUint,
    /// Transfers that drove the sender's balance below zero.
    pub negative_events: usize,
}

impl BalanceReplay {
    pub fn holders(&self) -> impl Iterator<Item = (&Address, &BigInt)> {
        self.balances.iter().filter(|(_, b)| b.sign() == Sign::Plus)
    }

    pub fn holder_count(&self) -> usize {
        self.holders().count()
    }

    pub fn positive_sum(&self) -> BigInt {
        self.holders().map(|(_, b)| b).sum()
    }

    pub fn is_consistent(&self) -> bool {
        self.negative_events == 0
    }
}

/// Replays transfers of `token`. The zero address is the mint source and burn sink and
/// never holds a balance.
pub fn replay_balances(ledger: &IndexedLedger, token: &Address) -> BalanceReplay {
    let mut r = BalanceReplay::default();
    for ev in ledger.transfers_of(token) {
        let amount = BigInt::from(ev.amount_raw.clone());
        if ev.from.is_zero() {
            r.minted += &ev.amount_raw;
        } else {
            let bal = r.balances.entry(ev.from).or_default();
            let was_negative = bal.is_negative();
            *bal -= &amount;
            if bal.is_negative() && !was_negative {
                r.negative_events += 1;
            }
        }
        if ev.to.is_zero() {
            r.burned += &ev.amount_raw;
        } else {
            *r.balances.entry(ev.to).or_default() += amount;
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStats {
    pub token: Address,
    pub tx_count: usize,
    pub first_transfer: Option<u64>,
    pub last_transfer: Option<u64>,
    pub active_days: u64,
    pub holder_count: usize,
    #[serde(with = "dec_str")]
    pub total_supply_raw: BigUint,
    /// Replay found a balance going negative; counts may be unreliable.
    pub inconsistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl TokenStats {
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<u64>| v.map(|t| t.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.token,
            self.tx_count,
            opt(self.first_transfer),
            opt(self.last_transfer),
            self.active_days,
            self.holder_count,
            self.total_supply_raw
        )
    }
}

pub fn token_stats(ledger: &IndexedLedger, token: &Address) -> Result<TokenStats> {
    let record = ledger.token(token).ok_or(Error::UnknownToken(*token))?;
    let transfers = ledger.transfers_of(token);
    let first = transfers.first().map(|ev| ledger.transfer_timestamp(ev));
    let last = transfers.last().map(|ev| ledger.transfer_timestamp(ev));
    let active_days = match (first, last) {
        (Some(f), Some(l)) => (l - f) / SECONDS_PER_DAY,
        _ => 0,
    };
    let replay = replay_balances(ledger, token);
    let mut warnings = Vec::new();
    if !replay.is_consistent() {
        warnings.push(format!(
            "{} transfer(s) overdrew a sender balance during replay",
            replay.negative_events
        ));
    }
    Ok(TokenStats {
        token: *token,
        tx_count: transfers.len(),
        first_transfer: first,
        last_transfer: last,
        active_days,
        holder_count: replay.holder_count(),
        total_supply_raw: record.total_supply_raw.clone(),
        inconsistent: !replay.is_consistent(),
        warnings,
    })
}

/// Stats for each token in `tokens`, in address order.
pub fn token_stats_all(
    ledger: &IndexedLedger,
    tokens: &BTreeSet<Address>,
) -> Result<Vec<TokenStats>> {
    let tokens: Vec<&Address> = tokens.iter().collect();
    tokens.par_iter().map(|t| token_stats(ledger, t)).collect()
}

pub fn stats_csv(stats: &[TokenStats]) -> String {
    let mut out = String::from(STATS_CSV_HEADER);
    out.push('\n');
    for s in stats {
        let _ = writeln!(out, "{}", s.csv_row());
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolderProfile {
    pub tokens: BTreeSet<Address>,
    pub targets: BTreeSet<Address>,
}

/// Bipartite token → holder graph over confirmed counterfeits, weighted by balance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HolderGraph {
    pub edges: BTreeMap<(Address, Address), BigUint>,
    pub holders: BTreeMap<Address, HolderProfile>,
}

impl HolderGraph {
    pub fn holder_count(&self) -> usize {
        self.holders.len()
    }

    /// Holders ranked by number of distinct counterfeits held, then address.
    pub fn top_holders(&self, n: usize) -> Vec<(Address, &HolderProfile)> {
        let mut v: Vec<_> = self.holders.iter().map(|(a, p)| (*a, p)).collect();
        v.sort_by(|a, b| b.1.tokens.len().cmp(&a.1.tokens.len()).then(a.0.cmp(&b.0)));
        v.truncate(n);
        v
    }

    pub fn multi_token_holders(&self) -> usize {
        self.holders.values().filter(|p| p.tokens.len() > 1).count()
    }

    pub fn to_json(&self) -> GraphJson {
        let tokens: BTreeSet<Address> = self.edges.keys().map(|(t, _)| *t).collect();
        let mut nodes: Vec<JsonNode> = tokens
            .iter()
            .map(|t| JsonNode::new(t, "counterfeit_token"))
            .collect();
        nodes.extend(self.holders.iter().map(|(a, p)| {
            JsonNode::new(a, "holder")
                .attr("tokens", p.tokens.len())
                .attr("targets", p.targets.len())
        }));
        GraphJson {
            nodes,
            edges: self
                .edges
                .iter()
                .map(|((t, h), bal)| JsonEdge::weighted(t, h, bal))
                .collect(),
        }
    }
}

pub fn build_holder_graph(
    ledger: &IndexedLedger,
    counterfeits: &[CounterfeitCandidate],
) -> HolderGraph {
    let mut targets_of: BTreeMap<Address, BTreeSet<Address>> = BTreeMap::new();
    for c in counterfeits {
        targets_of
            .entry(c.token)
            .or_default()
            .insert(c.target.address);
    }
    let replays: Vec<(Address, BalanceReplay)> = targets_of
        .keys()
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| (t, replay_balances(ledger, &t)))
        .collect();
    let mut g = HolderGraph::default();
    for (token, replay) in replays {
        for (holder, bal) in replay.holders() {
            let bal = bal.to_biguint().expect("positive");
            g.edges.insert((token, *holder), bal);
            let p = g.holders.entry(*holder).or_default();
            p.tokens.insert(token);
            p.targets.extend(targets_of[&token].iter().copied());
        }
    }
    g
}
