use serde::{Deserialize, Serialize};

use super::CreatorGraph;
use crate::counterfeit::{sorted_targets, TargetToken};
use crate::types::Address;

/// Creators shared between targets. Rows and columns follow cap rank.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix {
    pub targets: Vec<TargetToken>,
    pub counts: Vec<Vec<usize>>,
}

impl CooccurrenceMatrix {
    fn index(&self, target: &Address) -> Option<usize> {
        self.targets.iter().position(|t| t.address == *target)
    }

    pub fn get(&self, a: &Address, b: &Address) -> Option<usize> {
        Some(self.counts[self.index(a)?][self.index(b)?])
    }

    pub fn get_by_symbol(&self, a: &str, b: &str) -> Option<usize> {
        let i = self.targets.iter().position(|t| t.symbol == a)?;
        let j = self.targets.iter().position(|t| t.symbol == b)?;
        Some(self.counts[i][j])
    }

    /// Off-diagonal pairs with a non-zero count, largest first.
    pub fn top_pairs(&self, n: usize) -> Vec<(&TargetToken, &TargetToken, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.targets.len() {
            for j in i + 1..self.targets.len() {
                if self.counts[i][j] > 0 {
                    pairs.push((i, j, self.counts[i][j]));
                }
            }
        }
        pairs.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
        pairs
            .into_iter()
            .take(n)
            .map(|(i, j, c)| (&self.targets[i], &self.targets[j], c))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.counts.len();
        (0..n).all(|i| (0..n).all(|j| self.counts[i][j] == self.counts[j][i]))
    }

    /// Every cell is bounded by both diagonal entries.
    pub fn diagonal_bounds_hold(&self) -> bool {
        let n = self.counts.len();
        (0..n)
            .all(|i| (0..n).all(|j| self.counts[i][j] <= self.counts[i][i].min(self.counts[j][j])))
    }
}

pub fn creator_cooccurrence(graph: &CreatorGraph, targets: &[TargetToken]) -> CooccurrenceMatrix {
    let targets = sorted_targets(targets);
    let n = targets.len();
    let mut counts = vec![vec![0usize; n]; n];
    for profile in graph.creators.values() {
        let hit: Vec<usize> = targets
            .iter()
            .enumerate()
            .filter(|(_, t)| profile.targets.contains(&t.address))
            .map(|(i, _)| i)
            .collect();
        for &i in &hit {
            for &j in &hit {
                counts[i][j] += 1;
            }
        }
    }
    CooccurrenceMatrix { targets, counts }
}
