//! Planted-partition hypergraph generator and the detectability sweep.
//!
//! Two communities of equal size; edge counts are fixed (5n dyadic edges and
//! round(10n/3) triadic edges over 2n vertices, mean degree 10) while the
//! within-community proportions p2 and p3 control the signal. Edges are
//! sampled independently, so duplicates can occur; that keeps generation
//! linear in the number of vertices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::annealing::{derive_seed, run_restarts, ChainConfig, ConfigError};
use crate::compression::Clustering;
use crate::evaluation::adjusted_rand_index;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("cluster size must be at least 3, got {0}")]
    ClusterTooSmall(usize),
    #[error("proportion {name} = {value} is outside [0, 1]")]
    BadProportion { name: &'static str, value: f64 },
    #[error("grid resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error(transparent)]
    Chain(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedConfig {
    /// Vertices per community (two communities are planted).
    pub cluster_size: usize,
    /// Proportion of 2-edges falling inside a single community.
    pub p2: f64,
    /// Proportion of 3-edges falling inside a single community.
    pub p3: f64,
    pub seed: u64,
}

impl PlantedConfig {
    fn validate(&self) -> Result<(), GeneratorError> {
        if self.cluster_size < 3 {
            return Err(GeneratorError::ClusterTooSmall(self.cluster_size));
        }
        for (name, value) in [("p2", self.p2), ("p3", self.p3)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GeneratorError::BadProportion { name, value });
            }
        }
        Ok(())
    }
}

/// Number of 3-edges: round(10n/3), half rounding up.
pub fn triadic_edge_count(cluster_size: usize) -> usize {
    (20 * cluster_size + 3) / 6
}

/// Number of 2-edges: 5n.
pub fn dyadic_edge_count(cluster_size: usize) -> usize {
    5 * cluster_size
}

/// Generates one planted hypergraph and its ground-truth labeling
/// (vertices 0..n are community 0, n..2n community 1).
pub fn generate(config: &PlantedConfig) -> Result<(Hypergraph, Clustering), GeneratorError> {
    config.validate()?;
    let n = config.cluster_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edges = Vec::with_capacity(dyadic_edge_count(n) + triadic_edge_count(n));

    for _ in 0..dyadic_edge_count(n) {
        if rng.gen::<f64>() < config.p2 {
            let block = rng.gen_range(0..2usize);
            let [a, b] = distinct_pair(&mut rng, n);
            edges.push(vec![block * n + a, block * n + b]);
        } else {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            edges.push(vec![a, n + b]);
        }
    }
    for _ in 0..triadic_edge_count(n) {
        if rng.gen::<f64>() < config.p3 {
            let block = rng.gen_range(0..2usize);
            let [a, b, c] = distinct_triple(&mut rng, n);
            edges.push(vec![block * n + a, block * n + b, block * n + c]);
        } else {
            // Three vertices cannot straddle two blocks evenly; the forced
            // (2, 1) split draws its majority block uniformly.
            let major = rng.gen_range(0..2usize);
            let minor = 1 - major;
            let [a, b] = distinct_pair(&mut rng, n);
            let c = rng.gen_range(0..n);
            edges.push(vec![major * n + a, major * n + b, minor * n + c]);
        }
    }

    let hypergraph = Hypergraph::with_vertex_count(2 * n, edges, false)
        .expect("generated edges are valid by construction");
    let truth =
        Clustering::new((0..2 * n).map(|v| usize::from(v >= n)).collect(), 2).expect("two labels");
    Ok((hypergraph, truth))
}

fn distinct_pair<R: Rng>(rng: &mut R, n: usize) -> [usize; 2] {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    [a, b]
}

fn distinct_triple<R: Rng>(rng: &mut R, n: usize) -> [usize; 3] {
    loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let c = rng.gen_range(0..n);
        if a != b && a != c && b != c {
            return [a, b, c];
        }
    }
}

/// One cell of the detectability heatmap.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapCell {
    pub p2: f64,
    pub p3: f64,
    pub mean_ari: f64,
    pub n_graphs: usize,
    pub n_restarts: u64,
}

/// Mean recovery score of one (p2, p3) cell: generates `graphs` hypergraphs,
/// clusters each with `restarts` chains (m = 2), and scores the lowest-value
/// run of each against the planted labels.
pub fn evaluate_cell(
    cluster_size: usize,
    p2: f64,
    p3: f64,
    graphs: usize,
    template: &ChainConfig,
    restarts: u64,
) -> Result<HeatmapCell, GeneratorError> {
    let cell_salt = p2.to_bits() ^ p3.to_bits().rotate_left(17);
    let mut total_ari = 0.0;
    for g in 0..graphs {
        let config = PlantedConfig {
            cluster_size,
            p2,
            p3,
            seed: derive_seed(template.seed, cell_salt ^ (g as u64) << 1),
        };
        let (hypergraph, truth) = generate(&config)?;
        let mut chain = template.clone();
        chain.m = 2;
        chain.seed = derive_seed(config.seed, 0x5EED);
        let result = run_restarts(&hypergraph, &chain, restarts)?;
        total_ari +=
            adjusted_rand_index(&truth, &result.best_clustering).expect("equal-length partitions");
    }
    Ok(HeatmapCell {
        p2,
        p3,
        mean_ari: total_ari / graphs.max(1) as f64,
        n_graphs: graphs,
        n_restarts: restarts,
    })
}

/// Full grid sweep: proportions range over a resolution x resolution lattice
/// of [0, 1] x [0, 1]. Cells are evaluated in parallel and returned in row
/// order; results are independent of scheduling.
pub fn sweep_grid(
    cluster_size: usize,
    resolution: usize,
    graphs_per_cell: usize,
    template: &ChainConfig,
    restarts: u64,
) -> Result<Vec<HeatmapCell>, GeneratorError> {
    let cells = grid_points(resolution)?;
    cells
        .into_par_iter()
        .map(|(p2, p3)| evaluate_cell(cluster_size, p2, p3, graphs_per_cell, template, restarts))
        .collect()
}

/// The (p2, p3) lattice points of a sweep, in row order.
pub fn grid_points(resolution: usize) -> Result<Vec<(f64, f64)>, GeneratorError> {
    if resolution < 2 {
        return Err(GeneratorError::BadResolution(resolution));
    }
    let denom = (resolution - 1) as f64;
    let mut points = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            points.push((i as f64 / denom, j as f64 / denom));
        }
    }
    Ok(points)
}
