//! Counterfeit token identification.
//!
//! Candidates are found by lexical matching of every ERC-20 token's name and symbol
//! against a list of official targets ([`scan`]); false positives are then removed with
//! operator allowlists ([`apply_filters`]). Short combo-only symbol hits are routed to a
//! review queue instead of being confirmed.

mod matching;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use matching::{
    classify_dimension, classify_match, contains_at_word_boundary, normalize, MatchClass,
    MatchStatus, SHORT_IDENTIFIER_CHARS,
};

use crate::chain_store::{IndexedLedger, LabelSet};
use crate::error::{Error, Result};
use crate::types::Address;

/// An official token under protection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetToken {
    pub address: Address,
    pub name: String,
    pub symbol: String,
    pub cap_rank: u32,
}

pub fn load_targets(path: &Path) -> Result<Vec<TargetToken>> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        what: "target list",
        message: e.to_string(),
    })
}

/// Checks the target invariants: non-empty list, at least one identifier per target,
/// every address allowlisted as official, no duplicate addresses.
pub fn validate_targets(targets: &[TargetToken], labels: &LabelSet) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::Config("target list is empty".into()));
    }
    let mut seen = BTreeSet::new();
    for t in targets {
        if normalize(&t.name).is_empty() && normalize(&t.symbol).is_empty() {
            return Err(Error::Config(format!(
                "target {} has neither name nor symbol",
                t.address
            )));
        }
        if !labels.official_token_allowlist.contains(&t.address) {
            return Err(Error::Config(format!(
                "target {} is not in the official token allowlist",
                t.address
            )));
        }
        if !seen.insert(t.address) {
            return Err(Error::Config(format!("duplicate target {}", t.address)));
        }
    }
    Ok(())
}

/// Targets ordered by (cap rank, address).
pub fn sorted_targets(targets: &[TargetToken]) -> Vec<TargetToken> {
    let mut v = targets.to_vec();
    v.sort_by_key(|t| (t.cap_rank, t.address));
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterVerdict {
    Confirmed,
    /// Migrated official token.
    FilteredRule1,
    /// Released by a trusted creator (test deployments).
    FilteredRule2,
    /// Independent official token with a similar identifier.
    FilteredRule3,
    NeedsReview,
}

impl FilterVerdict {
    pub fn is_filtered(self) -> bool {
        matches!(
            self,
            FilterVerdict::FilteredRule1
                | FilterVerdict::FilteredRule2
                | FilterVerdict::FilteredRule3
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterfeitCandidate {
    pub token: Address,
    pub name: String,
    pub symbol: String,
    pub target: TargetToken,
    #[serde(rename = "match")]
    pub match_class: MatchClass,
    pub creator: Address,
    /// `None` until [`apply_filters`] has run.
    pub filter_verdict: Option<FilterVerdict>,
}

/// Flags every ERC-20 token (other than the targets themselves) whose identifiers match a
/// target. A token matching several targets yields one candidate per target. Output order
/// is (target cap rank, target address, token address) regardless of thread count.
pub fn scan(ledger: &IndexedLedger, targets: &[TargetToken]) -> Vec<CounterfeitCandidate> {
    let targets = sorted_targets(targets);
    let excluded: BTreeSet<Address> = targets.iter().map(|t| t.address).collect();
    let tokens: Vec<(&crate::chain_store::TokenRecord, String, String)> = ledger
        .tokens()
        .filter(|t| !excluded.contains(&t.address))
        .map(|t| (t, normalize(&t.name), normalize(&t.symbol)))
        .collect();

    targets
        .par_iter()
        .map(|target| {
            let tn = normalize(&target.name);
            let ts = normalize(&target.symbol);
            tokens
                .iter()
                .filter_map(|(tok, name, sym)| {
                    let m = MatchClass {
                        name_status: classify_dimension(name, &tn),
                        symbol_status: classify_dimension(sym, &ts),
                    };
                    m.is_match().then(|| CounterfeitCandidate {
                        token: tok.address,
                        name: tok.name.clone(),
                        symbol: tok.symbol.clone(),
                        target: target.clone(),
                        match_class: m,
                        creator: ledger
                            .contract(&tok.address)
                            .map(|c| c.creator)
                            .unwrap_or_default(),
                        filter_verdict: None,
                    })
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Verdict for one candidate; rules are checked in order 1, 2, 3, then the review rule.
pub fn filter_verdict(c: &CounterfeitCandidate, labels: &LabelSet) -> FilterVerdict {
    if labels.migrated_token_allowlist.contains(&c.token) {
        FilterVerdict::FilteredRule1
    } else if labels.trusted_creators.contains(&c.creator) {
        FilterVerdict::FilteredRule2
    } else if labels.official_token_allowlist.contains(&c.token) {
        FilterVerdict::FilteredRule3
    } else if needs_review(c) {
        FilterVerdict::NeedsReview
    } else {
        FilterVerdict::Confirmed
    }
}

/// Combo-only hit on a short target symbol with no name match.
fn needs_review(c: &CounterfeitCandidate) -> bool {
    c.match_class.symbol_status == MatchStatus::Combo
        && c.match_class.name_status == MatchStatus::Unrelated
        && normalize(&c.target.symbol).chars().count() < SHORT_IDENTIFIER_CHARS
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterOutcome {
    pub confirmed: Vec<CounterfeitCandidate>,
    pub filtered: Vec<CounterfeitCandidate>,
    pub needs_review: Vec<CounterfeitCandidate>,
}

impl FilterOutcome {
    pub fn len(&self) -> usize {
        self.confirmed.len() + self.filtered.len() + self.needs_review.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every candidate with its verdict, in the original scan order.
    pub fn all(&self) -> Vec<CounterfeitCandidate> {
        let mut v: Vec<CounterfeitCandidate> = self
            .confirmed
            .iter()
            .chain(&self.filtered)
            .chain(&self.needs_review)
            .cloned()
            .collect();
        v.sort_by(|a, b| {
            (a.target.cap_rank, a.target.address, a.token).cmp(&(
                b.target.cap_rank,
                b.target.address,
                b.token,
            ))
        });
        v
    }

    /// Distinct confirmed counterfeit token addresses.
    pub fn confirmed_tokens(&self) -> BTreeSet<Address> {
        self.confirmed.iter().map(|c| c.token).collect()
    }
}

pub fn apply_filters(candidates: &[CounterfeitCandidate], labels: &LabelSet) -> FilterOutcome {
    let mut out = FilterOutcome::default();
    for c in candidates {
        let verdict = filter_verdict(c, labels);
        let mut c = c.clone();
        c.filter_verdict = Some(verdict);
        match verdict {
            FilterVerdict::Confirmed => out.confirmed.push(c),
            FilterVerdict::NeedsReview => out.needs_review.push(c),
            _ => out.filtered.push(c),
        }
    }
    out
}

/// Lexical breakdown of candidates: rows symbol / name / both, columns combo / identical.
///
/// A token lands in the "symbol" row of a column when only its symbol has that status,
/// in "name" when only its name has it, and in "both" when both do; a token with a
/// combo name and an identical symbol therefore counts once in each column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalCell {
    pub combo: usize,
    pub identical: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalTable {
    pub symbol: LexicalCell,
    pub token_name: LexicalCell,
    pub both: LexicalCell,
    pub sum: LexicalCell,
    pub all: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LexicalRow {
    Symbol,
    TokenName,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LexicalColumn {
    Combo,
    Identical,
}

/// The (row, column) cells a match class populates.
pub fn lexical_cells(m: &MatchClass) -> Vec<(LexicalRow, LexicalColumn)> {
    let mut out = Vec::with_capacity(2);
    for (status, col) in [
        (MatchStatus::Combo, LexicalColumn::Combo),
        (MatchStatus::Identical, LexicalColumn::Identical),
    ] {
        let name = m.name_status == status;
        let sym = m.symbol_status == status;
        let row = match (name, sym) {
            (true, true) => Some(LexicalRow::Both),
            (true, false) => Some(LexicalRow::TokenName),
            (false, true) => Some(LexicalRow::Symbol),
            (false, false) => None,
        };
        if let Some(r) = row {
            out.push((r, col));
        }
    }
    out
}

impl LexicalTable {
    /// Tallies one match class per distinct token (the first candidate seen wins when a
    /// token matches several targets).
    pub fn tally(candidates: &[CounterfeitCandidate]) -> Self {
        let mut per_token: BTreeMap<Address, MatchClass> = BTreeMap::new();
        for c in candidates {
            per_token.entry(c.token).or_insert(c.match_class);
        }
        let mut t = LexicalTable {
            all: per_token.len(),
            ..Default::default()
        };
        let mut union = [BTreeSet::new(), BTreeSet::new()];
        for (addr, m) in &per_token {
            for (row, col) in lexical_cells(m) {
                let cell = match row {
                    LexicalRow::Symbol => &mut t.symbol,
                    LexicalRow::TokenName => &mut t.token_name,
                    LexicalRow::Both => &mut t.both,
                };
                match col {
                    LexicalColumn::Combo => {
                        cell.combo += 1;
                        union[0].insert(*addr);
                    }
                    LexicalColumn::Identical => {
                        cell.identical += 1;
                        union[1].insert(*addr);
                    }
                }
            }
        }
        t.sum = LexicalCell {
            combo: union[0].len(),
            identical: union[1].len(),
        };
        t
    }
}
