//! Move deltas must agree with from-scratch objective differences, for every
//! objective kind, across thousands of random moves on random hypergraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperclust_core::compression::{Clustering, CompressionState};
use hyperclust_core::entropy::{delta_ln_z, ln_z, ObjectiveKind};
use hyperclust_core::hypergraph::Hypergraph;
use hyperclust_core::oracles::random_hypergraph;

fn scratch_ln_z(hypergraph: &Hypergraph, labels: &[usize], m: usize, kind: ObjectiveKind) -> f64 {
    let state =
        CompressionState::new(hypergraph, Clustering::new(labels.to_vec(), m).unwrap()).unwrap();
    ln_z(&state, kind)
}

fn check_moves(
    hypergraph: &Hypergraph,
    m: usize,
    kinds: &[ObjectiveKind],
    moves: usize,
    seed: u64,
) {
    let n = hypergraph.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let mut state =
        CompressionState::new(hypergraph, Clustering::new(labels.clone(), m).unwrap()).unwrap();

    for trial in 0..moves {
        let v = rng.gen_range(0..n);
        let to = rng.gen_range(0..m);
        let from = labels[v];

        let deltas: Vec<f64> = kinds
            .iter()
            .map(|&kind| delta_ln_z(&state, v, to, kind))
            .collect();
        let reverse: Vec<f64> = {
            // Antisymmetry partner, evaluated after applying the move.
            let before: Vec<f64> = kinds
                .iter()
                .map(|&kind| scratch_ln_z(hypergraph, &labels, m, kind))
                .collect();
            state.apply_move(v, to);
            labels[v] = to;
            let back: Vec<f64> = kinds
                .iter()
                .map(|&kind| delta_ln_z(&state, v, from, kind))
                .collect();
            for (i, &kind) in kinds.iter().enumerate() {
                let after = scratch_ln_z(hypergraph, &labels, m, kind);
                match (before[i].is_finite(), after.is_finite()) {
                    (true, true) => {
                        let expected = after - before[i];
                        let tolerance = 1e-12 + 1e-9 * expected.abs();
                        assert!(
                            (deltas[i] - expected).abs() <= tolerance,
                            "{kind:?} trial {trial} (v={v}, {from}->{to}): \
                             delta {} vs scratch {expected}",
                            deltas[i]
                        );
                    }
                    (true, false) => assert_eq!(deltas[i], f64::NEG_INFINITY),
                    (false, true) => assert_eq!(deltas[i], f64::INFINITY),
                    // Impossible on both sides: the chain never consults the
                    // delta here, and the scratch difference is undefined.
                    (false, false) => {}
                }
            }
            back
        };
        for (i, &kind) in kinds.iter().enumerate() {
            if !deltas[i].is_finite() || !reverse[i].is_finite() {
                continue;
            }
            let residual = deltas[i] + reverse[i];
            assert!(
                residual.abs() <= 1e-9 * deltas[i].abs().max(1.0),
                "{kind:?} trial {trial}: not antisymmetric ({} vs {})",
                deltas[i],
                reverse[i]
            );
        }
    }
}

#[test]
fn deltas_match_scratch_differences() {
    let general = random_hypergraph(90, 50, 100, 2, 4);
    let dyadic = random_hypergraph(91, 50, 100, 2, 2);
    let general_kinds = [
        ObjectiveKind::SimpleHypergraph,
        ObjectiveKind::MultiHypergraph,
        ObjectiveKind::DegreeCorrected,
    ];
    for (i, &m) in [2usize, 3, 5].iter().enumerate() {
        check_moves(&general, m, &general_kinds, 900, 1_000 + i as u64);
        check_moves(&dyadic, m, &ObjectiveKind::ALL, 800, 2_000 + i as u64);
    }
}

#[test]
fn deltas_cover_isolated_and_multi_inclusion_vertices() {
    // Degenerate shapes: isolated vertices and repeated inclusions.
    let hypergraph =
        Hypergraph::with_vertex_count(6, vec![vec![0, 1, 0], vec![1, 2], vec![2, 0]], true)
            .unwrap();
    let kinds = [
        ObjectiveKind::SimpleHypergraph,
        ObjectiveKind::MultiHypergraph,
        ObjectiveKind::DegreeCorrected,
    ];
    check_moves(&hypergraph, 3, &kinds, 300, 77);
}
