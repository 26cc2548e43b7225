//! Partition scoring and dyadic projections.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::compression::Clustering;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("partitions have different lengths: {truth} vs {predicted}")]
    LengthMismatch { truth: usize, predicted: usize },
}

/// Cross-tabulation of two partitions of the same vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: BTreeMap<(usize, usize), usize>,
    row_marginals: BTreeMap<usize, usize>,
    col_marginals: BTreeMap<usize, usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(truth: &Clustering, predicted: &Clustering) -> Result<Self, EvalError> {
        if truth.len() != predicted.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                predicted: predicted.len(),
            });
        }
        let mut counts = BTreeMap::new();
        let mut row_marginals = BTreeMap::new();
        let mut col_marginals = BTreeMap::new();
        for (&a, &b) in truth.labels().iter().zip(predicted.labels()) {
            *counts.entry((a, b)).or_insert(0) += 1;
            *row_marginals.entry(a).or_insert(0) += 1;
            *col_marginals.entry(b).or_insert(0) += 1;
        }
        Ok(Self {
            counts,
            row_marginals,
            col_marginals,
            n: truth.len(),
        })
    }

    /// Nonzero cells as (truth label, predicted label, count).
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.counts.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Chance-adjusted pair-counting agreement. The 0/0 case of the adjusted
    /// formula is pinned down explicitly: identical partitions score 1 and
    /// differing ones score 0.
    pub fn adjusted_rand_index(&self) -> f64 {
        fn pairs(x: usize) -> f64 {
            (x as u128 * (x as u128).saturating_sub(1) / 2) as f64
        }
        let total_pairs = pairs(self.n);
        if total_pairs == 0.0 {
            // Zero or one vertex: the partitions are trivially identical.
            return 1.0;
        }
        let index: f64 = self.counts.values().map(|&c| pairs(c)).sum();
        let row_sum: f64 = self.row_marginals.values().map(|&c| pairs(c)).sum();
        let col_sum: f64 = self.col_marginals.values().map(|&c| pairs(c)).sum();
        let expected = row_sum * col_sum / total_pairs;
        let max_index = 0.5 * (row_sum + col_sum);
        if max_index == expected {
            return if self.is_identical_up_to_relabeling() {
                1.0
            } else {
                0.0
            };
        }
        (index - expected) / (max_index - expected)
    }

    fn is_identical_up_to_relabeling(&self) -> bool {
        self.counts
            .iter()
            .all(|(&(a, b), &c)| self.row_marginals[&a] == c && self.col_marginals[&b] == c)
    }
}

/// Adjusted Rand index of two equal-length partitions.
pub fn adjusted_rand_index(truth: &Clustering, predicted: &Clustering) -> Result<f64, EvalError> {
    Ok(ContingencyTable::new(truth, predicted)?.adjusted_rand_index())
}

/// Dyadic projection without multiplicities: one edge per vertex pair that
/// co-occurs in at least one hyperedge.
pub fn simple_projection(hypergraph: &Hypergraph) -> Hypergraph {
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for edge in hypergraph.edges() {
        for (a, b) in member_pairs(edge.members()) {
            pairs.insert((a, b));
        }
    }
    Hypergraph::with_vertex_count(
        hypergraph.vertex_count(),
        pairs.into_iter().map(|(a, b)| vec![a, b]).collect(),
        false,
    )
    .expect("projection pairs are valid edges")
}

/// Dyadic projection with multiplicities: a pair co-occurring in k distinct
/// hyperedges appears as k parallel edges.
pub fn multi_projection(hypergraph: &Hypergraph) -> Hypergraph {
    let mut edges = Vec::new();
    for edge in hypergraph.edges() {
        for (a, b) in member_pairs(edge.members()) {
            edges.push(vec![a, b]);
        }
    }
    Hypergraph::with_vertex_count(hypergraph.vertex_count(), edges, false)
        .expect("projection pairs are valid edges")
}

/// Unordered pairs of distinct members, in sorted order.
fn member_pairs(members: &[usize]) -> Vec<(usize, usize)> {
    let distinct: BTreeSet<usize> = members.iter().copied().collect();
    let distinct: Vec<usize> = distinct.into_iter().collect();
    let mut pairs = Vec::new();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            pairs.push((distinct[i], distinct[j]));
        }
    }
    pairs
}
