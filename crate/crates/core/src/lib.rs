//! Hypergraph clustering by annealed minimization of compression entropy.
//!
//! A clustering of a hypergraph, together with the per-type edge counts it
//! induces, is a lossy compressed description of the hypergraph. The number
//! of hypergraphs compatible with that description measures how much the
//! description leaves unsaid, so the most informative clustering is the one
//! whose compatible count is smallest. This crate evaluates that count in
//! log space for several counting models (simple, multi-edge, and
//! degree-corrected hypergraphs, plus the classic dyadic-graph count),
//! minimizes it with Metropolis simulated annealing, selects the cluster
//! count by description length, and ships a planted-partition generator,
//! clique projections, and partition scoring for benchmarking.

pub mod annealing;
pub mod combinatorics;
pub mod compression;
pub mod entropy;
pub mod evaluation;
pub mod generator;
pub mod hypergraph;
pub mod model_selection;
#[doc(hidden)]
pub mod oracles;

pub use annealing::{
    run_chain, run_restarts, Chain, ChainConfig, ConfigError, Initial, RunResult, Schedule,
    TracePoint,
};
pub use compression::{Clustering, CompressionState, LambdaType, MoveDelta};
pub use entropy::{delta_ln_z, ln_z, ObjectiveError, ObjectiveKind};
pub use evaluation::{adjusted_rand_index, multi_projection, simple_projection, ContingencyTable};
pub use generator::{generate, sweep_grid, HeatmapCell, PlantedConfig};
pub use hypergraph::{Hyperedge, Hypergraph};
pub use model_selection::{description_length, mdl_sweep, MdlRecord, MdlReport};
