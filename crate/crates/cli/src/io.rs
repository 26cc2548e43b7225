//! File formats: hyperedge lists, assignment and truth TSVs, run manifests.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use hyperclust_core::hypergraph::Hypergraph;

/// An edge list resolved against interned string labels. Labels are interned
/// in first-appearance order, and that order is what every output uses.
pub struct ParsedEdgeList {
    pub hypergraph: Hypergraph,
    pub labels: Vec<String>,
}

/// Parses the hyperedge-list format: one edge per line, vertex labels are
/// arbitrary non-whitespace tokens separated by commas or whitespace, `#`
/// starts a comment line, blank lines are skipped.
pub fn parse_edge_list(
    text: &str,
    allow_multi_inclusion: bool,
    dedupe: bool,
) -> Result<ParsedEdgeList> {
    let mut intern: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();

    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|token| !token.is_empty())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        if !allow_multi_inclusion {
            for (i, token) in tokens.iter().enumerate() {
                if tokens[..i].contains(token) {
                    bail!(
                        "line {}: vertex `{token}` appears twice in one edge \
                         (pass --allow-multi-inclusion to permit this)",
                        line_no + 1
                    );
                }
            }
        }
        let members: Vec<usize> = tokens
            .into_iter()
            .map(|token| {
                *intern.entry(token.to_string()).or_insert_with(|| {
                    labels.push(token.to_string());
                    labels.len() - 1
                })
            })
            .collect();
        if dedupe {
            let mut key = members.clone();
            key.sort_unstable();
            if seen.insert(key, ()).is_some() {
                continue;
            }
        }
        edges.push(members);
    }

    let hypergraph = Hypergraph::with_vertex_count(labels.len(), edges, allow_multi_inclusion)
        .map_err(|e| anyhow::anyhow!("invalid edge list: {e}"))?;
    Ok(ParsedEdgeList { hypergraph, labels })
}

pub fn read_edge_list_file(
    path: &Path,
    allow_multi_inclusion: bool,
    dedupe: bool,
) -> Result<(ParsedEdgeList, String)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = parse_edge_list(&text, allow_multi_inclusion, dedupe)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    Ok((parsed, text))
}

/// Renders a hypergraph back to the edge-list format using the given labels.
pub fn render_edge_list(hypergraph: &Hypergraph, labels: &[String]) -> String {
    let mut out = String::new();
    for edge in hypergraph.edges() {
        let line: Vec<&str> = edge.members().iter().map(|&v| labels[v].as_str()).collect();
        writeln!(out, "{}", line.join(" ")).expect("string write");
    }
    out
}

/// `label<TAB>cluster` lines, no header, in label order.
pub fn render_assignments(labels: &[String], clusters: &[usize]) -> String {
    let mut out = String::new();
    for (label, cluster) in labels.iter().zip(clusters) {
        writeln!(out, "{label}\t{cluster}").expect("string write");
    }
    out
}

/// Reads a `label<TAB>cluster` TSV (any whitespace separates the columns).
pub fn read_assignment_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(label), Some(cluster)) = (parts.next(), parts.next()) else {
            bail!(
                "{}:{}: expected `label cluster`",
                path.display(),
                line_no + 1
            );
        };
        rows.push((label.to_string(), cluster.to_string()));
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
pub struct ScheduleManifest {
    pub kind: String,
    pub beta0: f64,
    pub beta_final: f64,
}

/// Everything needed to reproduce a clustering run bit for bit.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub input_path: String,
    pub input_sha256: String,
    pub objective: String,
    pub clusters: usize,
    pub steps: u64,
    pub restarts: u64,
    pub seed: u64,
    pub schedule: ScheduleManifest,
    pub dedupe: bool,
    pub allow_multi_inclusion: bool,
    pub best_ln_z_nats: f64,
    pub best_entropy_bits: f64,
    pub accepted_count: u64,
    pub wall_time_seconds: f64,
    pub vertex_labels: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        write!(out, "{byte:02x}").expect("string write");
    }
    out
}
