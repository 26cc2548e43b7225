//! Acceptance suite: one test per release criterion, each printing a PASS
//! line with the measured numbers. Run with
//! `cargo test -p hyperclust-cli --test acceptance -- --nocapture`.
//!
//! Criterion 6 needs user-fetched contact datasets and is `#[ignore]`d; see
//! the README for how to enable it.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperclust_core::annealing::{run_restarts, Chain, ChainConfig, Initial, Schedule};
use hyperclust_core::compression::{Clustering, CompressionState};
use hyperclust_core::entropy::{delta_ln_z, ln_z, ObjectiveKind};
use hyperclust_core::evaluation::{adjusted_rand_index, multi_projection, simple_projection};
use hyperclust_core::generator::{generate, PlantedConfig};
use hyperclust_core::hypergraph::Hypergraph;
use hyperclust_core::model_selection::description_length;
use hyperclust_core::oracles::{
    all_labelings, degree_corrected_count, multi_count, random_hypergraph, simple_count,
    toy_instances, FillingMemo,
};

#[test]
fn criterion_01_counting_oracle_equivalence() {
    let started = Instant::now();
    let mut memo = FillingMemo::default();
    let mut checked = 0u64;
    for hypergraph in &toy_instances() {
        let n = hypergraph.vertex_count();
        for m in 1..=3usize {
            for labels in all_labelings(n, m) {
                let state =
                    CompressionState::new(hypergraph, Clustering::new(labels.clone(), m).unwrap())
                        .unwrap();
                for (kind, count) in [
                    (
                        ObjectiveKind::MultiHypergraph,
                        multi_count(hypergraph, &labels, m),
                    ),
                    (
                        ObjectiveKind::SimpleHypergraph,
                        simple_count(hypergraph, &labels, m),
                    ),
                    (
                        ObjectiveKind::DegreeCorrected,
                        degree_corrected_count(hypergraph, &labels, m, &mut memo),
                    ),
                ] {
                    let value = ln_z(&state, kind);
                    if count == 0 {
                        assert_eq!(value, f64::NEG_INFINITY, "{kind:?} labels {labels:?}");
                    } else {
                        assert_eq!(
                            value.exp().round(),
                            count as f64,
                            "{kind:?} labels {labels:?}"
                        );
                    }
                }
                checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "ACCEPTANCE criterion 01 PASS: {checked} compressions integer-exact \
         against enumeration in {elapsed:.2?}"
    );
}

#[test]
fn criterion_02_delta_consistency() {
    let started = Instant::now();
    let general = random_hypergraph(300, 50, 100, 2, 4);
    let dyadic = random_hypergraph(301, 50, 100, 2, 2);
    let mut moves = 0u64;
    for (salt, &m) in [2usize, 3, 5].iter().enumerate() {
        for (instance, kinds) in [
            (
                &general,
                &[
                    ObjectiveKind::SimpleHypergraph,
                    ObjectiveKind::MultiHypergraph,
                    ObjectiveKind::DegreeCorrected,
                ][..],
            ),
            (&dyadic, &ObjectiveKind::ALL[..]),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(400 + salt as u64);
            let n = instance.vertex_count();
            let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let mut state =
                CompressionState::new(instance, Clustering::new(labels.clone(), m).unwrap())
                    .unwrap();
            for _ in 0..1_700 {
                let v = rng.gen_range(0..n);
                let to = rng.gen_range(0..m);
                let before: Vec<f64> = kinds
                    .iter()
                    .map(|&kind| {
                        let fresh = CompressionState::new(
                            instance,
                            Clustering::new(labels.clone(), m).unwrap(),
                        )
                        .unwrap();
                        ln_z(&fresh, kind)
                    })
                    .collect();
                let deltas: Vec<f64> = kinds
                    .iter()
                    .map(|&kind| delta_ln_z(&state, v, to, kind))
                    .collect();
                state.apply_move(v, to);
                labels[v] = to;
                for (i, &kind) in kinds.iter().enumerate() {
                    let fresh = CompressionState::new(
                        instance,
                        Clustering::new(labels.clone(), m).unwrap(),
                    )
                    .unwrap();
                    let expected = ln_z(&fresh, kind) - before[i];
                    let tolerance = 1e-12 + 1e-9 * expected.abs();
                    assert!(
                        (deltas[i] - expected).abs() <= tolerance,
                        "{kind:?} m={m} v={v}->{to}: {} vs {expected}",
                        deltas[i]
                    );
                }
                moves += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE criterion 02 PASS: {moves} random moves within 1e-9 rel / 1e-12 abs \
         of scratch differences for all four objectives in {:.2?}",
        started.elapsed()
    );
}

#[test]
fn criterion_03_stationary_distribution() {
    let started = Instant::now();
    let hypergraph = Hypergraph::new(
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 1, 2]],
        false,
    )
    .unwrap();
    let beta = 1.0;
    for kind in [
        ObjectiveKind::DegreeCorrected,
        ObjectiveKind::MultiHypergraph,
    ] {
        // Exhaustive target: pi(c) proportional to Z(c)^-beta over all 16
        // labelings of the 4 vertices.
        let mut log_weights = Vec::with_capacity(16);
        for labels in all_labelings(4, 2) {
            let state =
                CompressionState::new(&hypergraph, Clustering::new(labels, 2).unwrap()).unwrap();
            log_weights.push(-beta * ln_z(&state, kind));
        }
        let max = log_weights
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let norm: f64 = log_weights.iter().map(|w| (w - max).exp()).sum();
        let target: Vec<f64> = log_weights.iter().map(|w| (w - max).exp() / norm).collect();

        let config = ChainConfig {
            m: 2,
            steps: 0,
            schedule: Schedule::Constant { beta },
            seed: 12_345,
            objective: kind,
            initial: Initial::Random,
            trace_every: None,
        };
        let mut chain = Chain::new(&hypergraph, &config).unwrap();
        for _ in 0..10_000 {
            chain.step();
        }
        let samples = 1_000_000u64;
        let mut visits = [0u64; 16];
        for _ in 0..samples {
            chain.step();
            let index = chain
                .clustering()
                .labels()
                .iter()
                .enumerate()
                .fold(0usize, |acc, (v, &label)| acc | (label << v));
            visits[index] += 1;
        }
        let tv: f64 = visits
            .iter()
            .zip(&target)
            .map(|(&count, &pi)| (count as f64 / samples as f64 - pi).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.02, "{kind:?}: total variation {tv}");
        println!(
            "ACCEPTANCE criterion 03 PASS ({kind:?}): total variation {tv:.4} <= 0.02 \
             over 16 states, 1e6 samples"
        );
    }
    assert!(started.elapsed().as_secs() < 60);
}

fn planted_mean_ari(p: f64, seeds: &[u64], restarts: u64, projection: Option<bool>) -> f64 {
    let mut total = 0.0;
    for &seed in seeds {
        let (hypergraph, truth) = generate(&PlantedConfig {
            cluster_size: 200,
            p2: p,
            p3: p,
            seed,
        })
        .unwrap();
        let input = match projection {
            None => hypergraph,
            Some(false) => simple_projection(&hypergraph),
            Some(true) => multi_projection(&hypergraph),
        };
        let config = ChainConfig::new(2, 20_000, seed ^ 0xA5A5, ObjectiveKind::DegreeCorrected);
        let result = run_restarts(&input, &config, restarts).unwrap();
        total += adjusted_rand_index(&truth, &result.best_clustering).unwrap();
    }
    total / seeds.len() as f64
}

#[test]
fn criterion_04_synthetic_recovery() {
    let started = Instant::now();
    let seeds = [10, 11, 12, 13, 14];
    let assortative = planted_mean_ari(0.95, &seeds, 20, None);
    assert!(assortative >= 0.9, "mean ARI at 0.95: {assortative}");
    let unstructured = planted_mean_ari(0.5, &seeds, 20, None);
    assert!(unstructured <= 0.1, "mean ARI at 0.5: {unstructured}");
    println!(
        "ACCEPTANCE criterion 04 PASS: mean ARI {assortative:.3} >= 0.9 at p = 0.95 and \
         {unstructured:.3} <= 0.1 at p = 0.5 (5 seeds, 20 restarts x 20000 steps, {:.2?})",
        started.elapsed()
    );
}

#[test]
fn criterion_05_projection_parity() {
    let started = Instant::now();
    let seeds = [20, 21, 22, 23, 24];
    let simple = planted_mean_ari(0.95, &seeds, 20, Some(false));
    let multi = planted_mean_ari(0.95, &seeds, 20, Some(true));
    assert!(simple >= 0.8, "simple projection mean ARI {simple}");
    assert!(multi >= 0.8, "multi projection mean ARI {multi}");
    println!(
        "ACCEPTANCE criterion 05 PASS: projection mean ARI simple {simple:.3}, \
         multi {multi:.3}, both >= 0.8 ({:.2?})",
        started.elapsed()
    );
}

/// Needs the contact datasets (see README); point HYPERCLUST_DATA_DIR at a
/// directory containing `contact-primary-school/` and `contact-high-school/`
/// in the nverts/simplices/node-labels triple format.
#[test]
#[ignore = "requires user-fetched contact datasets (HYPERCLUST_DATA_DIR)"]
fn criterion_06_empirical_datasets() {
    let Ok(root) = std::env::var("HYPERCLUST_DATA_DIR") else {
        println!("ACCEPTANCE criterion 06 SKIP: HYPERCLUST_DATA_DIR not set");
        return;
    };
    let root = PathBuf::from(root);
    let primary = dataset_ari(
        &root.join("contact-primary-school"),
        "contact-primary-school",
        11,
        ObjectiveKind::DegreeCorrected,
    );
    assert!(primary >= 0.85, "primary school ARI {primary}");
    let high_dc = dataset_ari(
        &root.join("contact-high-school"),
        "contact-high-school",
        9,
        ObjectiveKind::DegreeCorrected,
    );
    let high_plain = dataset_ari(
        &root.join("contact-high-school"),
        "contact-high-school",
        9,
        ObjectiveKind::MultiHypergraph,
    );
    assert!(
        high_dc >= 0.90,
        "high school degree-corrected ARI {high_dc}"
    );
    assert!(
        high_plain < high_dc,
        "non-corrected {high_plain} should trail degree-corrected {high_dc}"
    );
    println!(
        "ACCEPTANCE criterion 06 PASS: primary {primary:.3} >= 0.85, high school \
         degree-corrected {high_dc:.3} >= 0.90 (non-corrected {high_plain:.3})"
    );
}

fn dataset_ari(dir: &std::path::Path, stem: &str, m: usize, kind: ObjectiveKind) -> f64 {
    let read_ints = |name: &str| -> Vec<usize> {
        std::fs::read_to_string(dir.join(name))
            .unwrap_or_else(|e| panic!("cannot read {name}: {e}"))
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect()
    };
    let sizes = read_ints(&format!("{stem}-nverts.txt"));
    let vertices = read_ints(&format!("{stem}-simplices.txt"));
    let label_text = std::fs::read_to_string(dir.join(format!("{stem}-node-labels.txt"))).unwrap();

    let mut intern: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut offset = 0;
    for &size in &sizes {
        let edge: Vec<usize> = vertices[offset..offset + size]
            .iter()
            .map(|&id| {
                let next = intern.len();
                *intern.entry(id).or_insert(next)
            })
            .collect();
        offset += size;
        edges.push(edge);
    }
    let hypergraph = Hypergraph::with_vertex_count(intern.len(), edges, true).unwrap();

    let mut truth_labels = vec![usize::MAX; intern.len()];
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    for (line_no, line) in label_text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let first = parts.next().unwrap();
        let (id, class) = match parts.next() {
            Some(second) => (first.parse::<usize>().unwrap(), second.to_string()),
            None => (line_no + 1, first.to_string()),
        };
        if let Some(&v) = intern.get(&id) {
            let next = classes.len();
            truth_labels[v] = *classes.entry(class).or_insert(next);
        }
    }
    assert!(truth_labels.iter().all(|&l| l != usize::MAX));
    let truth = Clustering::new(truth_labels, classes.len()).unwrap();

    let config = ChainConfig::new(m, 20_000, 1_000, kind);
    let result = run_restarts(&hypergraph, &config, 50).unwrap();
    adjusted_rand_index(&truth, &result.best_clustering).unwrap()
}

#[test]
fn criterion_07_ari_unit_suite() {
    let cluster = |labels: &[usize]| {
        Clustering::new(labels.to_vec(), labels.iter().max().unwrap() + 1).unwrap()
    };
    let identity = cluster(&[0, 0, 1, 1, 2]);
    let permuted = cluster(&[1, 1, 2, 2, 0]);
    assert_eq!(adjusted_rand_index(&identity, &permuted).unwrap(), 1.0);

    let crossed = adjusted_rand_index(&cluster(&[0, 0, 1, 1]), &cluster(&[0, 1, 0, 1])).unwrap();
    assert!((crossed + 0.5).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(888);
    let a: Vec<usize> = (0..10_000).map(|_| rng.gen_range(0..4)).collect();
    let b: Vec<usize> = (0..10_000).map(|_| rng.gen_range(0..4)).collect();
    let independent = adjusted_rand_index(&cluster(&a), &cluster(&b)).unwrap();
    assert!(independent.abs() <= 0.05, "got {independent}");
    println!(
        "ACCEPTANCE criterion 07 PASS: identity 1.0, crossed {crossed}, \
         independent {independent:.4}"
    );
}

#[test]
fn criterion_08_mdl_additivity_and_conventions() {
    // Hand example: n = 4, m = 2, two 2-edges, 4 + C(3,2) = 7 bits exactly.
    let hypergraph = Hypergraph::new(vec![vec![0, 1], vec![2, 3]], false).unwrap();
    let state =
        CompressionState::new(&hypergraph, Clustering::new(vec![0, 0, 1, 1], 2).unwrap()).unwrap();
    let (partition, conditional) = description_length(&state, ObjectiveKind::DegreeCorrected);
    assert_eq!(partition, 7.0, "hand example must be exact");

    // Additivity is checked across a sweep's records in-library; here the
    // per-pair identity is re-asserted directly.
    let total = partition + conditional;
    assert_eq!(total, partition + conditional);

    let template = ChainConfig::new(1, 500, 3, ObjectiveKind::DegreeCorrected);
    let planted = generate(&PlantedConfig {
        cluster_size: 20,
        p2: 0.9,
        p3: 0.9,
        seed: 5,
    })
    .unwrap()
    .0;
    let report =
        hyperclust_core::model_selection::mdl_sweep(&planted, 1..=4, &template, 2).unwrap();
    for record in &report.records {
        assert_eq!(
            record.total_bits,
            record.partition_bits + record.conditional_bits
        );
    }
    println!(
        "ACCEPTANCE criterion 08 PASS: 7-bit hand example exact, additivity exact \
         across {} sweep records (m* = {})",
        report.records.len(),
        report.m_star
    );
}

#[test]
fn criterion_09_performance_envelope() {
    // Wall-clock envelope: one 20000-step chain on the 400-vertex instance.
    let (hypergraph, _) = generate(&PlantedConfig {
        cluster_size: 200,
        p2: 0.95,
        p3: 0.95,
        seed: 31,
    })
    .unwrap();
    let config = ChainConfig::new(2, 20_000, 7, ObjectiveKind::DegreeCorrected);
    let started = Instant::now();
    let result = hyperclust_core::annealing::run_chain(&hypergraph, &config).unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "chain took {elapsed:?}");
    assert!(result.best_ln_z.is_finite());

    // Work-counter instrumentation: the same moves on the same edges must
    // cost identical work after padding the graph with 4000 isolated
    // vertices, and the per-move work must scale with the vertex degree.
    let padded = Hypergraph::with_vertex_count(4_400, hypergraph.edge_lists(), false).unwrap();
    let labels: Vec<usize> = (0..4_400).map(|v| usize::from(v % 2 == 1)).collect();
    let base_state = CompressionState::new(
        &hypergraph,
        Clustering::new(labels[..400].to_vec(), 2).unwrap(),
    )
    .unwrap();
    let padded_state = CompressionState::new(&padded, Clustering::new(labels, 2).unwrap()).unwrap();

    let kinds = [
        ObjectiveKind::DegreeCorrected,
        ObjectiveKind::MultiHypergraph,
        ObjectiveKind::SimpleHypergraph,
    ];
    let max_edge = hypergraph.max_edge_size() as u64;
    for v in (0..400).step_by(13) {
        let to = (base_state.label(v) + 1) % 2;
        for kind in kinds {
            base_state.reset_delta_work();
            delta_ln_z(&base_state, v, to, kind);
            let work_small = base_state.delta_work();

            padded_state.reset_delta_work();
            delta_ln_z(&padded_state, v, to, kind);
            let work_padded = padded_state.delta_work();
            assert_eq!(
                work_small, work_padded,
                "{kind:?} v={v}: work depends on vertex count"
            );
            if kind != ObjectiveKind::SimpleHypergraph {
                let degree = hypergraph.degree(v) as u64;
                let bound = 16 * (degree + 1) * max_edge + 16;
                assert!(
                    work_small <= bound,
                    "{kind:?} v={v}: work {work_small} exceeds degree bound {bound}"
                );
            }
        }
    }
    println!(
        "ACCEPTANCE criterion 09 PASS: 20000-step chain in {elapsed:.2?} (< 5 s); \
         delta work invariant under 4000 isolated-vertex padding and degree-bounded"
    );
}

#[test]
fn criterion_10_cli_determinism() {
    use std::process::Command;
    let dir = tempfile::TempDir::new().unwrap();
    let input = dir.path().join("g.edges");
    let run = |args: &[&str]| {
        let output = Command::new(env!("CARGO_BIN_EXE_hyperclust"))
            .env("HYPERCLUST_THREADS", "2")
            .args(args)
            .output()
            .expect("spawn hyperclust");
        assert!(
            output.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    };
    run(&[
        "generate",
        "--n",
        "100",
        "--p2",
        "0.9",
        "--p3",
        "0.9",
        "--seed",
        "17",
        "--out",
        input.to_str().unwrap(),
    ]);
    let mut assignments = Vec::new();
    let mut manifests = Vec::new();
    for prefix in ["one", "two"] {
        let out_prefix = dir.path().join(prefix);
        run(&[
            "cluster",
            "--input",
            input.to_str().unwrap(),
            "--clusters",
            "2",
            "--steps",
            "5000",
            "--restarts",
            "8",
            "--seed",
            "23",
            "--out-prefix",
            out_prefix.to_str().unwrap(),
        ]);
        assignments
            .push(std::fs::read(dir.path().join(format!("{prefix}.assignments.tsv"))).unwrap());
        let manifest: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join(format!("{prefix}.manifest.json"))).unwrap(),
        )
        .unwrap();
        manifests.push(manifest);
    }
    assert_eq!(assignments[0], assignments[1], "assignment bytes differ");
    let mut a = manifests[0].clone();
    let mut b = manifests[1].clone();
    a["wall_time_seconds"] = serde_json::Value::Null;
    b["wall_time_seconds"] = serde_json::Value::Null;
    assert_eq!(a, b, "manifests differ beyond wall time");
    println!(
        "ACCEPTANCE criterion 10 PASS: bit-identical assignments and manifests \
         (modulo wall time) across two parallel-restart runs"
    );
}
