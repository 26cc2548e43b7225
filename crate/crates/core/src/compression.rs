//! Sufficient statistics of a clustering over a fixed hypergraph.
//!
//! A [`CompressionState`] mirrors everything the objectives need: cluster
//! sizes, cluster degree sums, the count of edges per intersection type, and
//! per-cluster intersection-size histograms. Single-vertex moves update all
//! of it in time proportional to the moved vertex's degree, and every move
//! returns an undo record so a rejected proposal can be rolled back exactly.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusteringError {
    #[error("label {label} of vertex {vertex} is outside [0, {m})")]
    LabelOutOfRange {
        vertex: usize,
        label: usize,
        m: usize,
    },
    #[error("cluster capacity must be at least 1")]
    ZeroCapacity,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("clustering has {labels} labels but the hypergraph has {vertices} vertices")]
    LengthMismatch { labels: usize, vertices: usize },
}

/// Intersection type of an edge: sparse, canonically ordered association
/// from cluster label to intersection count (zero entries omitted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaType(Vec<(usize, usize)>);

impl LambdaType {
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for label in labels {
            *counts.entry(label).or_insert(0) += 1;
        }
        LambdaType(counts.into_iter().collect())
    }

    /// (label, count) pairs in increasing label order, all counts >= 1.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn count_for(&self, label: usize) -> usize {
        self.0
            .binary_search_by_key(&label, |&(l, _)| l)
            .map(|pos| self.0[pos].1)
            .unwrap_or(0)
    }

    /// Total intersection count; equals the size of any edge of this type.
    pub fn size(&self) -> usize {
        self.0.iter().map(|&(_, c)| c).sum()
    }

    /// The type after moving `mult` inclusions from one label to another.
    pub(crate) fn shifted(&self, from: usize, to: usize, mult: usize) -> LambdaType {
        debug_assert_ne!(from, to);
        let mut entries = self.0.clone();
        let pos = entries
            .binary_search_by_key(&from, |&(l, _)| l)
            .expect("shifted source label must be present");
        debug_assert!(entries[pos].1 >= mult);
        if entries[pos].1 == mult {
            entries.remove(pos);
        } else {
            entries[pos].1 -= mult;
        }
        match entries.binary_search_by_key(&to, |&(l, _)| l) {
            Ok(pos) => entries[pos].1 += mult,
            Err(pos) => entries.insert(pos, (to, mult)),
        }
        LambdaType(entries)
    }
}

/// Assignment of each vertex to one of `m` labels. `m` is a capacity, not a
/// count: empty clusters are legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<usize>,
    m: usize,
}

impl Clustering {
    pub fn new(labels: Vec<usize>, m: usize) -> Result<Self, ClusteringError> {
        if m == 0 {
            return Err(ClusteringError::ZeroCapacity);
        }
        for (vertex, &label) in labels.iter().enumerate() {
            if label >= m {
                return Err(ClusteringError::LabelOutOfRange { vertex, label, m });
            }
        }
        Ok(Self { labels, m })
    }

    pub fn random<R: rand::Rng>(n: usize, m: usize, rng: &mut R) -> Self {
        assert!(m >= 1);
        Self {
            labels: (0..n).map(|_| rng.gen_range(0..m)).collect(),
            m,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Undo record for the most recent move; see [`CompressionState::undo`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveDelta {
    vertex: usize,
    from: usize,
    to: usize,
    serial: u64,
}

impl MoveDelta {
    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn from(&self) -> usize {
        self.from
    }

    pub fn to(&self) -> usize {
        self.to
    }
}

/// Derived statistics of (hypergraph, clustering), kept consistent under
/// single-vertex moves.
///
/// Confined to one chain at a time (single writer); independent states over
/// the same hypergraph may run in parallel threads.
#[derive(Debug)]
pub struct CompressionState<'a> {
    hypergraph: &'a Hypergraph,
    clustering: Clustering,
    cluster_sizes: Vec<usize>,
    cluster_degree_sums: Vec<usize>,
    lambda_counts: BTreeMap<LambdaType, usize>,
    /// Per label i: intersection size s (>= 1) -> number of edges whose
    /// intersection with cluster i has size s.
    histograms: Vec<BTreeMap<usize, usize>>,
    /// Per label i: the set of types currently present with a nonzero entry
    /// at i. Lets objectives visit exactly the terms a size change reprices.
    cluster_types: Vec<BTreeSet<LambdaType>>,
    per_edge_types: Vec<LambdaType>,
    serial: u64,
    /// Work-unit counter incremented by the objective delta evaluations;
    /// used to assert their cost scales with vertex degree, not graph size.
    delta_work: Cell<u64>,
}

impl<'a> CompressionState<'a> {
    pub fn new(hypergraph: &'a Hypergraph, clustering: Clustering) -> Result<Self, StateError> {
        if clustering.len() != hypergraph.vertex_count() {
            return Err(StateError::LengthMismatch {
                labels: clustering.len(),
                vertices: hypergraph.vertex_count(),
            });
        }
        let m = clustering.m();
        let mut cluster_sizes = vec![0usize; m];
        let mut cluster_degree_sums = vec![0usize; m];
        for (v, &label) in clustering.labels().iter().enumerate() {
            cluster_sizes[label] += 1;
            cluster_degree_sums[label] += hypergraph.degree(v);
        }
        let mut lambda_counts: BTreeMap<LambdaType, usize> = BTreeMap::new();
        let mut histograms: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); m];
        let mut cluster_types: Vec<BTreeSet<LambdaType>> = vec![BTreeSet::new(); m];
        let mut per_edge_types = Vec::with_capacity(hypergraph.edge_count());
        for edge in hypergraph.edges() {
            let ty = LambdaType::from_labels(edge.members().iter().map(|&v| clustering.label(v)));
            for &(label, count) in ty.entries() {
                *histograms[label].entry(count).or_insert(0) += 1;
                cluster_types[label].insert(ty.clone());
            }
            *lambda_counts.entry(ty.clone()).or_insert(0) += 1;
            per_edge_types.push(ty);
        }
        Ok(Self {
            hypergraph,
            clustering,
            cluster_sizes,
            cluster_degree_sums,
            lambda_counts,
            histograms,
            cluster_types,
            per_edge_types,
            serial: 0,
            delta_work: Cell::new(0),
        })
    }

    pub fn hypergraph(&self) -> &'a Hypergraph {
        self.hypergraph
    }

    pub fn clustering(&self) -> &Clustering {
        &self.clustering
    }

    pub fn m(&self) -> usize {
        self.clustering.m()
    }

    pub fn label(&self, v: usize) -> usize {
        self.clustering.label(v)
    }

    pub fn cluster_sizes(&self) -> &[usize] {
        &self.cluster_sizes
    }

    /// e_i: total degree of cluster i.
    pub fn cluster_degree_sums(&self) -> &[usize] {
        &self.cluster_degree_sums
    }

    /// e_lambda: number of edges per intersection type.
    pub fn lambda_counts(&self) -> &BTreeMap<LambdaType, usize> {
        &self.lambda_counts
    }

    pub fn histogram(&self, label: usize) -> &BTreeMap<usize, usize> {
        &self.histograms[label]
    }

    pub(crate) fn types_touching(&self, label: usize) -> &BTreeSet<LambdaType> {
        &self.cluster_types[label]
    }

    pub fn edge_type(&self, edge: usize) -> &LambdaType {
        &self.per_edge_types[edge]
    }

    /// Moves `v` to `new_label`, updating every statistic in place. Moving
    /// to the current label is a recorded no-op. Returns the undo record.
    pub fn apply_move(&mut self, v: usize, new_label: usize) -> MoveDelta {
        let from = self.clustering.label(v);
        if new_label != from {
            self.shift_vertex(v, from, new_label);
        }
        self.serial += 1;
        MoveDelta {
            vertex: v,
            from,
            to: new_label,
            serial: self.serial,
        }
    }

    /// Rolls back the most recent un-undone move. `delta` must be the record
    /// returned by that move; stale records are a contract violation.
    pub fn undo(&mut self, delta: MoveDelta) {
        debug_assert_eq!(
            delta.serial, self.serial,
            "undo applied to a stale move record"
        );
        if delta.to != delta.from {
            self.shift_vertex(delta.vertex, delta.to, delta.from);
        }
        self.serial -= 1;
    }

    fn shift_vertex(&mut self, v: usize, from: usize, to: usize) {
        debug_assert_ne!(from, to);
        debug_assert_eq!(self.clustering.label(v), from);
        self.clustering.labels[v] = to;
        self.cluster_sizes[from] -= 1;
        self.cluster_sizes[to] += 1;
        let d = self.hypergraph.degree(v);
        self.cluster_degree_sums[from] -= d;
        self.cluster_degree_sums[to] += d;

        for &(edge, mult) in self.hypergraph.incidence(v) {
            let old_ty = self.per_edge_types[edge].clone();
            let new_ty = old_ty.shifted(from, to, mult);

            let s_old = old_ty.count_for(from);
            let s_new = s_old - mult;
            Self::hist_dec(&mut self.histograms[from], s_old);
            if s_new >= 1 {
                Self::hist_inc(&mut self.histograms[from], s_new);
            }
            let t_old = old_ty.count_for(to);
            let t_new = t_old + mult;
            if t_old >= 1 {
                Self::hist_dec(&mut self.histograms[to], t_old);
            }
            Self::hist_inc(&mut self.histograms[to], t_new);

            match self.lambda_counts.get_mut(&old_ty) {
                Some(count) if *count > 1 => *count -= 1,
                Some(_) => {
                    self.lambda_counts.remove(&old_ty);
                    for &(label, _) in old_ty.entries() {
                        self.cluster_types[label].remove(&old_ty);
                    }
                }
                None => unreachable!("edge type missing from lambda counts"),
            }
            let created = match self.lambda_counts.entry(new_ty.clone()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += 1;
                    false
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(1);
                    true
                }
            };
            if created {
                for &(label, _) in new_ty.entries() {
                    self.cluster_types[label].insert(new_ty.clone());
                }
            }
            self.per_edge_types[edge] = new_ty;
        }
    }

    fn hist_inc(hist: &mut BTreeMap<usize, usize>, s: usize) {
        *hist.entry(s).or_insert(0) += 1;
    }

    fn hist_dec(hist: &mut BTreeMap<usize, usize>, s: usize) {
        match hist.get_mut(&s) {
            Some(count) if *count > 1 => *count -= 1,
            Some(_) => {
                hist.remove(&s);
            }
            None => unreachable!("histogram entry missing"),
        }
    }

    pub(crate) fn add_delta_work(&self, units: u64) {
        self.delta_work.set(self.delta_work.get() + units);
    }

    /// Accumulated work units of all objective delta evaluations so far.
    pub fn delta_work(&self) -> u64 {
        self.delta_work.get()
    }

    pub fn reset_delta_work(&self) {
        self.delta_work.set(0);
    }
}

/// Statistic-by-statistic equality; bookkeeping (serial, work counter) and
/// the hypergraph reference identity are excluded.
impl PartialEq for CompressionState<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.clustering == other.clustering
            && self.cluster_sizes == other.cluster_sizes
            && self.cluster_degree_sums == other.cluster_degree_sums
            && self.lambda_counts == other.lambda_counts
            && self.histograms == other.histograms
            && self.cluster_types == other.cluster_types
            && self.per_edge_types == other.per_edge_types
    }
}
