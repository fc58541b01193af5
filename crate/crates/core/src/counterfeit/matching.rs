use caseless::default_case_fold_str;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::TargetToken;

/// Target identifiers shorter than this (in chars, after normalisation) only
/// combo-match at word boundaries.
pub const SHORT_IDENTIFIER_CHARS: usize = 4;

/// NFKC, full case folding, trimmed, internal whitespace runs collapsed to one space.
pub fn normalize(identifier: &str) -> String {
    let nfkc: String = identifier.nfkc().collect();
    let folded: String = default_case_fold_str(&nfkc).nfkc().collect();
    folded.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStatus {
    Identical,
    Combo,
    Unrelated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchClass {
    pub name_status: MatchStatus,
    pub symbol_status: MatchStatus,
}

impl MatchClass {
    pub const UNRELATED: MatchClass = MatchClass {
        name_status: MatchStatus::Unrelated,
        symbol_status: MatchStatus::Unrelated,
    };

    pub fn new(name_status: MatchStatus, symbol_status: MatchStatus) -> Self {
        Self {
            name_status,
            symbol_status,
        }
    }

    /// At least one identifier dimension matches.
    pub fn is_match(&self) -> bool {
        self.name_status != MatchStatus::Unrelated || self.symbol_status != MatchStatus::Unrelated
    }

    /// Type-1: an identifier is copied verbatim.
    pub fn is_identical_copy(&self) -> bool {
        self.name_status == MatchStatus::Identical || self.symbol_status == MatchStatus::Identical
    }

    /// Type-2: an identifier is combo-squatted.
    pub fn is_combo_squat(&self) -> bool {
        self.name_status == MatchStatus::Combo || self.symbol_status == MatchStatus::Combo
    }
}

/// Whether `needle` occurs in `hay` with a non-alphanumeric character (or the string
/// edge) on both sides. Both inputs are already normalised.
pub fn contains_at_word_boundary(hay: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    hay.match_indices(needle).any(|(i, m)| {
        let before = hay[..i].chars().next_back();
        let after = hay[i + m.len()..].chars().next();
        !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
    })
}

/// Compares one normalised candidate identifier against one normalised target identifier.
pub fn classify_dimension(candidate: &str, target: &str) -> MatchStatus {
    if target.is_empty() {
        return MatchStatus::Unrelated;
    }
    if candidate == target {
        return MatchStatus::Identical;
    }
    let contained = if target.chars().count() < SHORT_IDENTIFIER_CHARS {
        contains_at_word_boundary(candidate, target)
    } else {
        candidate.contains(target)
    };
    if contained {
        MatchStatus::Combo
    } else {
        MatchStatus::Unrelated
    }
}

pub fn classify_match(
    candidate_name: &str,
    candidate_symbol: &str,
    target: &TargetToken,
) -> MatchClass {
    MatchClass {
        name_status: classify_dimension(&normalize(candidate_name), &normalize(&target.name)),
        symbol_status: classify_dimension(&normalize(candidate_symbol), &normalize(&target.symbol)),
    }
}
