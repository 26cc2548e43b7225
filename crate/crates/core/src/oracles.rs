//! Exhaustive counting oracles and tiny-instance helpers for the test
//! suites. Not part of the public API.
//!
//! Everything here counts by direct enumeration over vertices, subsets, and
//! stub assignments; nothing calls the closed-form objective code it is used
//! to check. Sizes are expected to be toy scale (a handful of vertices and
//! edges); the counts are exact integers.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::Hypergraph;

/// Dense intersection-type census: for each type (a length-m count vector),
/// the number of edges of that type. Computed straight from the labels.
pub fn type_census(
    hypergraph: &Hypergraph,
    labels: &[usize],
    m: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let mut census = BTreeMap::new();
    for edge in hypergraph.edges() {
        let mut ty = vec![0usize; m];
        for &v in edge.members() {
            ty[labels[v]] += 1;
        }
        *census.entry(ty).or_insert(0) += 1;
    }
    census
}

/// All distinct-vertex edges (as bitmasks) matching an intersection type,
/// found by walking every subset of the vertex set.
fn compatible_edges(n: usize, labels: &[usize], ty: &[usize]) -> Vec<u32> {
    let size: usize = ty.iter().sum();
    let mut found = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let mut counts = vec![0usize; ty.len()];
        for v in 0..n {
            if mask & (1 << v) != 0 {
                counts[labels[v]] += 1;
            }
        }
        if counts == ty {
            found.push(mask);
        }
    }
    found
}

/// Multi-hypergraph count: each of the e edges of a type is selected
/// independently among the compatible edges, so the count per type is
/// (number of compatible edges)^e.
pub fn multi_count(hypergraph: &Hypergraph, labels: &[usize], m: usize) -> u128 {
    let n = hypergraph.vertex_count();
    let mut z: u128 = 1;
    for (ty, &e) in &type_census(hypergraph, labels, m) {
        let options = compatible_edges(n, labels, ty).len() as u128;
        z *= options.pow(e as u32);
    }
    z
}

/// Simple-hypergraph count: sets of e distinct compatible edges per type,
/// counted by enumerating the subsets.
pub fn simple_count(hypergraph: &Hypergraph, labels: &[usize], m: usize) -> u128 {
    let n = hypergraph.vertex_count();
    let mut z: u128 = 1;
    for (ty, &e) in &type_census(hypergraph, labels, m) {
        let options = compatible_edges(n, labels, ty).len();
        z *= count_subsets_of_size(options, e);
    }
    z
}

/// Number of e-subsets of a pool, by walking all of them.
fn count_subsets_of_size(pool: usize, e: usize) -> u128 {
    fn walk(start: usize, pool: usize, left: usize) -> u128 {
        if left == 0 {
            return 1;
        }
        if start + left > pool {
            return 0;
        }
        (start..=pool - left)
            .map(|next| walk(next + 1, pool, left - 1))
            .sum()
    }
    walk(0, pool, e)
}

/// Memo for [`count_exact_fillings`]; counts are symmetric in the bins, so
/// the sorted capacity vector is a sound key.
#[derive(Default)]
pub struct FillingMemo {
    cache: HashMap<Vec<usize>, u128>,
}

/// Number of ways to assign sum(caps) distinguishable items to bins so that
/// bin b receives exactly caps[b] items, by enumerating the items' choices
/// one at a time.
pub fn count_exact_fillings(caps: &[usize], memo: &mut FillingMemo) -> u128 {
    let mut key: Vec<usize> = caps.iter().copied().filter(|&c| c > 0).collect();
    key.sort_unstable();
    if key.is_empty() {
        return 1;
    }
    if let Some(&hit) = memo.cache.get(&key) {
        return hit;
    }
    let mut total = 0u128;
    for b in 0..key.len() {
        // Skip duplicate capacities: choosing among equal bins is handled by
        // multiplying with their multiplicity.
        if b > 0 && key[b] == key[b - 1] {
            continue;
        }
        let multiplicity = key.iter().filter(|&&c| c == key[b]).count() as u128;
        let mut next = key.clone();
        next[b] -= 1;
        total += multiplicity * count_exact_fillings(&next, memo);
    }
    memo.cache.insert(key, total);
    total
}

fn factorial_u128(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Degree-corrected count via the two-step stub construction: assign each
/// cluster's labeled stubs to the types they will serve, group each type's
/// stubs into ordered packets, combine packets into edges, and divide by e!
/// per type because edge order within a type is immaterial.
pub fn degree_corrected_count(
    hypergraph: &Hypergraph,
    labels: &[usize],
    m: usize,
    memo: &mut FillingMemo,
) -> u128 {
    let census = type_census(hypergraph, labels, m);
    let mut z: u128 = 1;
    for i in 0..m {
        let caps: Vec<usize> = census
            .iter()
            .filter_map(|(ty, &e)| (ty[i] > 0).then_some(ty[i] * e))
            .collect();
        z *= count_exact_fillings(&caps, memo);
    }
    for (ty, &e) in &census {
        let mut packetizations: u128 = 1;
        for &lambda_i in ty.iter().filter(|&&c| c > 0) {
            packetizations *= count_exact_fillings(&vec![lambda_i; e], memo);
        }
        let order = factorial_u128(e);
        assert_eq!(packetizations % order, 0, "edge-order quotient must divide");
        z *= packetizations / order;
    }
    z
}

/// Every labeling of n vertices with labels below m, in counting order.
pub fn all_labelings(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total).map(move |index| {
        let mut rest = index;
        (0..n)
            .map(|_| {
                let label = rest % m;
                rest /= m;
                label
            })
            .collect()
    })
}

/// Small deterministic instance family for the exhaustive counting checks:
/// covers single edges, overlaps, duplicates, size-1 edges, and isolation.
pub fn toy_instances() -> Vec<Hypergraph> {
    let build =
        |n: usize, edges: Vec<Vec<usize>>| Hypergraph::with_vertex_count(n, edges, false).unwrap();
    vec![
        build(4, vec![]),
        build(3, vec![vec![0, 1], vec![1, 2]]),
        build(3, vec![vec![0, 1, 2]]),
        build(4, vec![vec![0, 1], vec![2, 3], vec![0, 2]]),
        build(4, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]]),
        build(4, vec![vec![0, 1], vec![0, 1]]),
        build(5, vec![vec![0, 1, 2], vec![2, 3, 4]]),
        build(5, vec![vec![0], vec![1, 2], vec![2, 3, 4]]),
        build(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3]]),
        build(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]),
        build(6, vec![vec![0, 1, 2], vec![0, 1, 2], vec![3, 4]]),
        build(6, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]),
    ]
}

/// Random hypergraph with distinct-member edges of sizes in [min, max].
pub fn random_hypergraph(
    seed: u64,
    n: usize,
    edge_count: usize,
    min_size: usize,
    max_size: usize,
) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let size = rng.gen_range(min_size..=max_size.min(n));
        let mut members = Vec::with_capacity(size);
        while members.len() < size {
            let v = rng.gen_range(0..n);
            if !members.contains(&v) {
                members.push(v);
            }
        }
        edges.push(members);
    }
    Hypergraph::with_vertex_count(n, edges, false).unwrap()
}
