use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::json::{GraphJson, JsonEdge, JsonNode};
use crate::chain_store::IndexedLedger;
use crate::counterfeit::CounterfeitCandidate;
use crate::types::Address;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CreatorNodeKind {
    EoaCreator,
    ContractCreator,
    CounterfeitToken,
}

impl CreatorNodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CreatorNodeKind::EoaCreator => "eoa_creator",
            CreatorNodeKind::ContractCreator => "contract_creator",
            CreatorNodeKind::CounterfeitToken => "counterfeit_token",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreatorProfile {
    pub tokens: BTreeSet<Address>,
    /// Targets (by address) of this creator's counterfeits.
    pub targets: BTreeSet<Address>,
}

impl CreatorProfile {
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn target_count(&self) -> usize {
        self.targets.len()
    }
}

/// Token-creator graph. Edges run creator → token, plus EOA → factory when a token was
/// deployed by a contract.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreatorGraph {
    pub nodes: BTreeMap<Address, CreatorNodeKind>,
    pub edges: BTreeSet<(Address, Address)>,
    /// Keyed by direct creator (the factory for contract-created tokens).
    pub creators: BTreeMap<Address, CreatorProfile>,
    /// Tokens deployed by a contract rather than an EOA.
    pub contract_created_tokens: usize,
}

impl CreatorGraph {
    pub fn token_count(&self) -> usize {
        self.nodes
            .values()
            .filter(|k| **k == CreatorNodeKind::CounterfeitToken)
            .count()
    }

    pub fn in_degree(&self, node: &Address) -> usize {
        self.edges.iter().filter(|(_, dst)| dst == node).count()
    }

    pub fn profile(&self, creator: &Address) -> Option<&CreatorProfile> {
        self.creators.get(creator)
    }

    /// Creators ordered by token count (descending), then address.
    pub fn top_creators(&self, n: usize) -> Vec<(Address, &CreatorProfile)> {
        let mut v: Vec<_> = self.creators.iter().map(|(a, p)| (*a, p)).collect();
        v.sort_by(|a, b| {
            b.1.token_count()
                .cmp(&a.1.token_count())
                .then(a.0.cmp(&b.0))
        });
        v.truncate(n);
        v
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self
                .nodes
                .iter()
                .map(|(a, k)| {
                    let node = JsonNode::new(a, k.as_str());
                    match self.creators.get(a) {
                        Some(p) => node
                            .attr("tokens", p.token_count())
                            .attr("targets", p.target_count()),
                        None => node,
                    }
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(s, d)| JsonEdge::new(s, d))
                .collect(),
        }
    }
}

/// Builds the creator graph from confirmed counterfeits. Candidates repeating a token
/// (one per matched target) add target coverage but no extra nodes or edges.
pub fn build_creator_graph(
    ledger: &IndexedLedger,
    counterfeits: &[CounterfeitCandidate],
) -> CreatorGraph {
    let mut g = CreatorGraph::default();
    let mut contract_created = BTreeSet::new();
    for c in counterfeits {
        let record = ledger.contract(&c.token);
        let creator = record.map(|r| r.creator).unwrap_or(c.creator);
        let via_contract = record.is_some_and(|r| r.created_via_internal);

        g.nodes.insert(c.token, CreatorNodeKind::CounterfeitToken);
        g.edges.insert((creator, c.token));
        let profile = g.creators.entry(creator).or_default();
        profile.tokens.insert(c.token);
        profile.targets.insert(c.target.address);

        if via_contract {
            contract_created.insert(c.token);
            g.nodes
                .entry(creator)
                .or_insert(CreatorNodeKind::ContractCreator);
            let invoker = record
                .and_then(|r| ledger.tx(&r.creation_tx))
                .map(|tx| tx.from);
            if let Some(eoa) = invoker {
                g.nodes.entry(eoa).or_insert(CreatorNodeKind::EoaCreator);
                g.edges.insert((eoa, creator));
            }
        } else {
            g.nodes
                .entry(creator)
                .or_insert(CreatorNodeKind::EoaCreator);
        }
    }
    g.contract_created_tokens = contract_created.len();
    g
}
