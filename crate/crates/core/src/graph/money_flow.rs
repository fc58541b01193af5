use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::json::{GraphJson, JsonEdge, JsonNode};
use crate::amount::{dec_str, pow10};
use crate::chain_store::{IndexedLedger, LabelSet};
use crate::error::{Error, Result};
use crate::types::Address;

pub const DEFAULT_MAX_DEPTH: u32 = 4;

/// Aggregated edges below this many wei (0.001 ETH) are dropped.
pub fn min_edge_wei() -> BigUint {
    pow10(15)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowNodeKind {
    Exchange,
    Scam,
    FundTransfer,
    Frontier,
}

impl FlowNodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowNodeKind::Exchange => "exchange",
            FlowNodeKind::Scam => "scam",
            FlowNodeKind::FundTransfer => "fund_transfer",
            FlowNodeKind::Frontier => "frontier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowNode {
    pub kind: FlowNodeKind,
    /// Hops from the nearest scam address.
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowEdge {
    pub src: Address,
    pub dst: Address,
    #[serde(with = "dec_str")]
    pub weight_wei: BigUint,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoneyFlowGraph {
    pub max_depth: u32,
    pub nodes: BTreeMap<Address, FlowNode>,
    pub edges: Vec<FlowEdge>,
}

impl MoneyFlowGraph {
    pub fn in_degree(&self, node: &Address) -> usize {
        self.edges.iter().filter(|e| e.dst == *node).count()
    }

    pub fn nodes_of(&self, kind: FlowNodeKind) -> impl Iterator<Item = &Address> {
        self.nodes
            .iter()
            .filter(move |(_, n)| n.kind == kind)
            .map(|(a, _)| a)
    }

    /// Total wei arriving at exchange nodes.
    pub fn wei_into_exchanges(&self) -> BigUint {
        self.edges
            .iter()
            .filter(|e| self.nodes[&e.dst].kind == FlowNodeKind::Exchange)
            .map(|e| &e.weight_wei)
            .sum()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self
                .nodes
                .iter()
                .map(|(a, n)| JsonNode::new(a, n.kind.as_str()).attr("depth", n.depth))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| JsonEdge::weighted(e.src, e.dst, &e.weight_wei))
                .collect(),
        }
    }
}

/// Summed value per (from, to) pair over all value-carrying transactions.
fn aggregated_edges(ledger: &IndexedLedger) -> BTreeMap<Address, BTreeMap<Address, BigUint>> {
    let mut adj: BTreeMap<Address, BTreeMap<Address, BigUint>> = BTreeMap::new();
    for (from, to, wei) in ledger.value_edges() {
        *adj.entry(from).or_default().entry(to).or_default() += wei;
    }
    let floor = min_edge_wei();
    for out in adj.values_mut() {
        out.retain(|_, w| *w >= floor);
    }
    adj
}

/// Breadth-first expansion along outgoing ETH from the scam addresses. Exchanges are
/// sinks; nodes first reached at `max_depth` are left unexpanded as frontier nodes.
pub fn trace_money_flow(
    ledger: &IndexedLedger,
    scam_addresses: &BTreeSet<Address>,
    labels: &LabelSet,
    max_depth: u32,
) -> Result<MoneyFlowGraph> {
    if max_depth == 0 {
        return Err(Error::Config("max_depth must be at least 1".into()));
    }
    let adj = aggregated_edges(ledger);
    let kind_at = |a: &Address, depth: u32| {
        if labels.exchange_addresses.contains(a) {
            FlowNodeKind::Exchange
        } else if scam_addresses.contains(a) {
            FlowNodeKind::Scam
        } else if depth >= max_depth {
            FlowNodeKind::Frontier
        } else {
            FlowNodeKind::FundTransfer
        }
    };

    let mut g = MoneyFlowGraph {
        max_depth,
        ..Default::default()
    };
    let mut queue = VecDeque::new();
    for a in scam_addresses {
        g.nodes.insert(
            *a,
            FlowNode {
                kind: kind_at(a, 0),
                depth: 0,
            },
        );
        queue.push_back(*a);
    }
    while let Some(src) = queue.pop_front() {
        let node = &g.nodes[&src];
        if node.kind == FlowNodeKind::Exchange || node.depth >= max_depth {
            continue;
        }
        let depth = node.depth + 1;
        let Some(out) = adj.get(&src) else { continue };
        for (dst, wei) in out {
            g.edges.push(FlowEdge {
                src,
                dst: *dst,
                weight_wei: wei.clone(),
            });
            if !g.nodes.contains_key(dst) {
                g.nodes.insert(
                    *dst,
                    FlowNode {
                        kind: kind_at(dst, depth),
                        depth,
                    },
                );
                queue.push_back(*dst);
            }
        }
    }
    g.edges.sort_by_key(|e| (e.src, e.dst));
    Ok(g)
}
