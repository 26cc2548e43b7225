//! Description-length model selection for the cluster count.
//!
//! The total cost of describing a hypergraph through a clustering splits
//! into the cost of the clustered summary itself and the conditional cost
//! of the hypergraph given the summary, which is the objective value. All
//! internal arithmetic is in nats; conversion to bits happens once, here,
//! at the reporting boundary.

use rayon::prelude::*;

use crate::annealing::{derive_seed, run_restarts, ChainConfig, ConfigError, Initial};
use crate::compression::{Clustering, CompressionState};
use crate::entropy::{ln_z, ObjectiveKind};
use crate::hypergraph::Hypergraph;

/// Printed next to sweep results; this criterion is known to lean low.
pub const MDL_CAVEAT: &str = "note: description-length selection often underestimates the \
number of clusters; treat m* as guidance rather than ground truth";

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdlRecord {
    pub m: usize,
    pub partition_bits: f64,
    pub conditional_bits: f64,
    pub total_bits: f64,
    pub clustering: Clustering,
    pub best_ln_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdlReport {
    pub records: Vec<MdlRecord>,
    /// Cluster count with the minimal total; ties break toward smaller m.
    pub m_star: usize,
}

/// Exact small binomial coefficient as a float (multiplicative form, rounded
/// back to the integer it represents).
fn binomial_count(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut value = 1.0_f64;
    for j in 1..=k {
        value = value * (n - k + j) as f64 / j as f64;
    }
    value.round()
}

/// Description-length split, in bits: (partition cost, conditional cost).
///
/// The partition cost is n log m plus, for each edge size k >= 2 present in
/// the hypergraph, C(m + k - 1, k) log l_k where l_k counts edges of size k.
/// Sizes with l_k = 0 are skipped, and l_k = 1 contributes log 1 = 0. The
/// sum has no k = 1 term, so size-1 edges are carried only by the
/// conditional cost. The conditional cost is the objective value of the
/// compression.
pub fn description_length(state: &CompressionState, kind: ObjectiveKind) -> (f64, f64) {
    let hypergraph = state.hypergraph();
    let n = hypergraph.vertex_count() as f64;
    let m = state.m() as u64;
    let mut partition_nats = n * (m as f64).ln();
    for (&k, &count) in hypergraph.edge_size_histogram().iter() {
        if k < 2 {
            continue;
        }
        partition_nats += binomial_count(m + k as u64 - 1, k as u64) * (count as f64).ln();
    }
    let conditional_nats = ln_z(state, kind);
    (nats_to_bits(partition_nats), nats_to_bits(conditional_nats))
}

/// Anneals one clustering per m in `m_range` (restarts per m, seeds derived
/// deterministically from the template seed) and reports the description
/// length of each.
pub fn mdl_sweep(
    hypergraph: &Hypergraph,
    m_range: std::ops::RangeInclusive<usize>,
    template: &ChainConfig,
    restarts: u64,
) -> Result<MdlReport, ConfigError> {
    assert!(!m_range.is_empty(), "m range must be nonempty");
    if !matches!(template.initial, Initial::Random) {
        return Err(ConfigError::InitialCapacityMismatch {
            got: 0,
            want: *m_range.start(),
        });
    }
    let records: Result<Vec<MdlRecord>, ConfigError> = m_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| {
            let mut config = template.clone();
            config.m = m;
            config.seed = derive_seed(template.seed, m as u64);
            let result = run_restarts(hypergraph, &config, restarts)?;
            let state = CompressionState::new(hypergraph, result.best_clustering.clone())
                .expect("clustering produced for this hypergraph");
            let (partition_bits, conditional_bits) = description_length(&state, config.objective);
            Ok(MdlRecord {
                m,
                partition_bits,
                conditional_bits,
                total_bits: partition_bits + conditional_bits,
                clustering: result.best_clustering,
                best_ln_z: result.best_ln_z,
            })
        })
        .collect();
    let records = records?;
    let m_star = records
        .iter()
        .min_by(|a, b| a.total_bits.total_cmp(&b.total_bits).then(a.m.cmp(&b.m)))
        .map(|r| r.m)
        .expect("nonempty m range");
    Ok(MdlReport { records, m_star })
}
