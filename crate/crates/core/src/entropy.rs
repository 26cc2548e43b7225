//! Objective evaluation: the log of the number of hypergraphs compatible
//! with the current compression, for each counting model.
//!
//! All values are natural logarithms. A compression that no hypergraph of
//! the requested kind can realize evaluates to [`f64::NEG_INFINITY`]; the
//! annealer treats proposals into such states as rejections.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use thiserror::Error;

use crate::combinatorics::{ln_binomial, ln_binomial_real, ln_factorial};
use crate::compression::{CompressionState, LambdaType};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("objective requires dyadic edges")]
    RequiresDyadic,
    #[error("unknown objective `{0}`")]
    UnknownName(String),
}

/// The counting model whose log-count is minimized.
///
/// `SimpleHypergraph` counts edge sets without repetition, `MultiHypergraph`
/// counts per-edge selections with repetition allowed, `DegreeCorrected`
/// counts constructions from labeled degree stubs (an approximation that
/// overcounts parallel edges and multiple inclusions; no correction term is
/// applied), and `RosvallBergstromGraph` is the classic dyadic-graph count
/// over the cluster module matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    SimpleHypergraph,
    MultiHypergraph,
    DegreeCorrected,
    RosvallBergstromGraph,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [
        ObjectiveKind::SimpleHypergraph,
        ObjectiveKind::MultiHypergraph,
        ObjectiveKind::DegreeCorrected,
        ObjectiveKind::RosvallBergstromGraph,
    ];

    pub fn requires_dyadic(self) -> bool {
        matches!(self, ObjectiveKind::RosvallBergstromGraph)
    }

    pub fn validate_for(self, hypergraph: &Hypergraph) -> Result<(), ObjectiveError> {
        if self.requires_dyadic() && !hypergraph.is_dyadic() {
            return Err(ObjectiveError::RequiresDyadic);
        }
        Ok(())
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::SimpleHypergraph => "simple",
            ObjectiveKind::MultiHypergraph => "multi",
            ObjectiveKind::DegreeCorrected => "degree-corrected",
            ObjectiveKind::RosvallBergstromGraph => "rb-graph",
        }
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(ObjectiveKind::SimpleHypergraph),
            "multi" => Ok(ObjectiveKind::MultiHypergraph),
            "degree-corrected" => Ok(ObjectiveKind::DegreeCorrected),
            "rb-graph" => Ok(ObjectiveKind::RosvallBergstromGraph),
            other => Err(ObjectiveError::UnknownName(other.to_string())),
        }
    }
}

/// Accumulator that keeps infinite terms out of float arithmetic. A term of
/// -inf on the new side dominates everything (the proposal is impossible); a
/// -inf term on the old side alone means the move escapes an impossible
/// state, which surfaces as +inf.
struct LogDiff {
    sum: f64,
    new_impossible: bool,
    old_impossible: bool,
}

impl LogDiff {
    fn new() -> Self {
        Self {
            sum: 0.0,
            new_impossible: false,
            old_impossible: false,
        }
    }

    fn add_new(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            self.new_impossible = true;
        } else {
            self.sum += term;
        }
    }

    fn sub_old(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            self.old_impossible = true;
        } else {
            self.sum -= term;
        }
    }

    fn value(self) -> f64 {
        if self.new_impossible {
            f64::NEG_INFINITY
        } else if self.old_impossible {
            f64::INFINITY
        } else {
            self.sum
        }
    }
}

/// ln Z of the current compression under `kind`.
pub fn ln_z(state: &CompressionState, kind: ObjectiveKind) -> f64 {
    match kind {
        ObjectiveKind::MultiHypergraph => multi_ln_z(state),
        ObjectiveKind::SimpleHypergraph => set_count_ln_z(state, simple_type_term),
        ObjectiveKind::DegreeCorrected => degree_corrected_ln_z(state),
        ObjectiveKind::RosvallBergstromGraph => {
            debug_assert!(state.hypergraph().is_dyadic());
            set_count_ln_z(state, rb_type_term)
        }
    }
}

/// ln Z(c') - ln Z(c) for the proposal moving `v` to `new_label`, without
/// mutating the state. Cost is proportional to the degree of `v` plus the
/// histogram or type entries of the two affected clusters, never to the
/// vertex or edge count.
pub fn delta_ln_z(
    state: &CompressionState,
    v: usize,
    new_label: usize,
    kind: ObjectiveKind,
) -> f64 {
    let from = state.label(v);
    if new_label == from {
        return 0.0;
    }
    match kind {
        ObjectiveKind::MultiHypergraph => multi_delta(state, v, from, new_label),
        ObjectiveKind::SimpleHypergraph => {
            set_count_delta(state, v, from, new_label, simple_type_term)
        }
        ObjectiveKind::DegreeCorrected => degree_corrected_delta(state, v, from, new_label),
        ObjectiveKind::RosvallBergstromGraph => {
            debug_assert!(state.hypergraph().is_dyadic());
            set_count_delta(state, v, from, new_label, rb_type_term)
        }
    }
}

// --- multi-hypergraph count -------------------------------------------------
//
// Every edge is chosen independently among all edges of its type, so
// ln Z = sum_i sum_s N_i[s] * ln C(|C_i|, s) over the per-cluster
// intersection-size histograms.

fn multi_ln_z(state: &CompressionState) -> f64 {
    let mut acc = LogDiff::new();
    for (label, &size) in state.cluster_sizes().iter().enumerate() {
        for (&s, &count) in state.histogram(label) {
            acc.add_new(count as f64 * ln_binomial(size as u64, s as u64));
        }
    }
    acc.value()
}

fn multi_delta(state: &CompressionState, v: usize, from: usize, to: usize) -> f64 {
    let mut acc = LogDiff::new();
    let mut work = 0u64;
    let n_from = state.cluster_sizes()[from];
    let n_to = state.cluster_sizes()[to];

    // Intersection-size shifts of the edges incident to v, per cluster.
    let mut shifts_from: BTreeMap<usize, i64> = BTreeMap::new();
    let mut shifts_to: BTreeMap<usize, i64> = BTreeMap::new();
    for &(edge, mult) in state.hypergraph().incidence(v) {
        work += 1;
        let ty = state.edge_type(edge);
        let s_old = ty.count_for(from);
        *shifts_from.entry(s_old).or_insert(0) -= 1;
        if s_old > mult {
            *shifts_from.entry(s_old - mult).or_insert(0) += 1;
        }
        let t_old = ty.count_for(to);
        if t_old >= 1 {
            *shifts_to.entry(t_old).or_insert(0) -= 1;
        }
        *shifts_to.entry(t_old + mult).or_insert(0) += 1;
    }

    work += cluster_reprice(
        &mut acc,
        state.histogram(from),
        &shifts_from,
        n_from,
        n_from - 1,
    );
    work += cluster_reprice(&mut acc, state.histogram(to), &shifts_to, n_to, n_to + 1);
    state.add_delta_work(work);
    acc.value()
}

/// Old and new contribution of one cluster: every histogram entry is priced
/// against the old and the new cluster size, with the incident-edge shifts
/// folded into the new side.
fn cluster_reprice(
    acc: &mut LogDiff,
    histogram: &BTreeMap<usize, usize>,
    shifts: &BTreeMap<usize, i64>,
    old_size: usize,
    new_size: usize,
) -> u64 {
    let mut work = 0u64;
    let sizes: BTreeSet<usize> = histogram.keys().chain(shifts.keys()).copied().collect();
    for s in sizes {
        work += 1;
        let old_count = histogram.get(&s).copied().unwrap_or(0) as i64;
        let new_count = old_count + shifts.get(&s).copied().unwrap_or(0);
        debug_assert!(new_count >= 0);
        if old_count > 0 {
            acc.sub_old(old_count as f64 * ln_binomial(old_size as u64, s as u64));
        }
        if new_count > 0 {
            acc.add_new(new_count as f64 * ln_binomial(new_size as u64, s as u64));
        }
    }
    work
}

// --- set-style counts (simple hypergraphs, dyadic graphs) --------------------
//
// Both count one selection per type: ln Z = sum over types of a per-type
// term that depends on the cluster sizes and the type's edge count.

/// Simple-hypergraph term: C(M, e) where M = prod_i C(|C_i|, lambda_i) is
/// the number of distinct possible edges of this type.
fn simple_type_term(sizes: &[usize], ty: &LambdaType, count: usize) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let mut ln_possible = 0.0;
    for &(label, c) in ty.entries() {
        let term = ln_binomial(sizes[label] as u64, c as u64);
        if term == f64::NEG_INFINITY {
            return if count > 0 { f64::NEG_INFINITY } else { 0.0 };
        }
        ln_possible += term;
    }
    ln_binomial_real(ln_possible, count as u64)
}

/// Dyadic module-matrix term: C(|C_i||C_j|, M_ij) for a between-cluster
/// type, C(C(|C_i|, 2), M_ii) for a within-cluster one.
fn rb_type_term(sizes: &[usize], ty: &LambdaType, count: usize) -> f64 {
    if count == 0 {
        return 0.0;
    }
    match ty.entries() {
        [(i, 2)] => {
            let s = sizes[*i] as u64;
            ln_binomial(s * s.saturating_sub(1) / 2, count as u64)
        }
        [(i, 1), (j, 1)] => ln_binomial((sizes[*i] * sizes[*j]) as u64, count as u64),
        other => unreachable!("non-dyadic type {other:?} under a dyadic objective"),
    }
}

fn set_count_ln_z(state: &CompressionState, term: fn(&[usize], &LambdaType, usize) -> f64) -> f64 {
    let sizes = state.cluster_sizes();
    let mut acc = LogDiff::new();
    for (ty, &count) in state.lambda_counts() {
        acc.add_new(term(sizes, ty, count));
    }
    acc.value()
}

fn set_count_delta(
    state: &CompressionState,
    v: usize,
    from: usize,
    to: usize,
    term: fn(&[usize], &LambdaType, usize) -> f64,
) -> f64 {
    let old_sizes = state.cluster_sizes();
    let mut new_sizes = old_sizes.to_vec();
    new_sizes[from] -= 1;
    new_sizes[to] += 1;

    let mut work = 0u64;
    let mut count_shifts: BTreeMap<LambdaType, i64> = BTreeMap::new();
    for &(edge, mult) in state.hypergraph().incidence(v) {
        work += 1;
        let old_ty = state.edge_type(edge);
        *count_shifts.entry(old_ty.clone()).or_insert(0) -= 1;
        *count_shifts
            .entry(old_ty.shifted(from, to, mult))
            .or_insert(0) += 1;
    }

    // Affected terms: every type touching either cluster is repriced by the
    // size change, plus the types gaining or losing edges.
    let affected: BTreeSet<&LambdaType> = state
        .types_touching(from)
        .iter()
        .chain(state.types_touching(to).iter())
        .chain(count_shifts.keys())
        .collect();

    let mut acc = LogDiff::new();
    for ty in affected {
        work += ty.entries().len() as u64;
        let old_count = state.lambda_counts().get(ty).copied().unwrap_or(0) as i64;
        let new_count = old_count + count_shifts.get(ty).copied().unwrap_or(0);
        debug_assert!(new_count >= 0);
        acc.sub_old(term(old_sizes, ty, old_count as usize));
        acc.add_new(term(&new_sizes, ty, new_count as usize));
    }
    state.add_delta_work(work);
    acc.value()
}

// --- degree-corrected count ---------------------------------------------------
//
// Counting labeled-stub constructions and forgetting the stub labels gives
// ln Z = sum_i ln(e_i!) - sum_t ln(e_t!) - sum_t e_t * sum_i ln(lambda_i!).

fn degree_corrected_ln_z(state: &CompressionState) -> f64 {
    let mut total: f64 = state
        .cluster_degree_sums()
        .iter()
        .map(|&e| ln_factorial(e as u64))
        .sum();
    for (ty, &count) in state.lambda_counts() {
        total -= ln_factorial(count as u64);
        total -= count as f64 * type_member_ln_factorials(ty);
    }
    total
}

fn type_member_ln_factorials(ty: &LambdaType) -> f64 {
    ty.entries()
        .iter()
        .map(|&(_, c)| ln_factorial(c as u64))
        .sum()
}

fn degree_corrected_delta(state: &CompressionState, v: usize, from: usize, to: usize) -> f64 {
    let d = state.hypergraph().degree(v) as u64;
    let e_from = state.cluster_degree_sums()[from] as u64;
    let e_to = state.cluster_degree_sums()[to] as u64;
    let mut delta = ln_factorial(e_from - d) - ln_factorial(e_from) + ln_factorial(e_to + d)
        - ln_factorial(e_to);

    let mut work = 1u64;
    let mut count_shifts: BTreeMap<LambdaType, i64> = BTreeMap::new();
    for &(edge, mult) in state.hypergraph().incidence(v) {
        work += 1;
        let old_ty = state.edge_type(edge);
        *count_shifts.entry(old_ty.clone()).or_insert(0) -= 1;
        *count_shifts
            .entry(old_ty.shifted(from, to, mult))
            .or_insert(0) += 1;
    }
    for (ty, shift) in &count_shifts {
        work += ty.entries().len() as u64;
        let old_count = state.lambda_counts().get(ty).copied().unwrap_or(0) as i64;
        let new_count = old_count + shift;
        debug_assert!(new_count >= 0);
        let member_cost = type_member_ln_factorials(ty);
        delta += ln_factorial(old_count as u64) + old_count as f64 * member_cost;
        delta -= ln_factorial(new_count as u64) + new_count as f64 * member_cost;
    }
    state.add_delta_work(work);
    delta
}
