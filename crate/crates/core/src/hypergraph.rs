//! Immutable hypergraph storage with degree and incidence indexes.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },
    #[error("edge {index} repeats vertex {vertex} but multi-inclusion is disabled")]
    DuplicateVertex { index: usize, vertex: usize },
    #[error("vertex count {given} is smaller than the {required} required by the edges")]
    VertexCountTooSmall { given: usize, required: usize },
}

/// One hyperedge. Members may repeat only when the hypergraph was built with
/// multi-inclusion enabled; a repeated member then counts once per inclusion
/// toward degrees and intersection sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    members: Vec<usize>,
}

impl Hyperedge {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Edge size, counting multiplicity of inclusion.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Immutable after build; safe to share across any number of reader threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    degrees: Vec<usize>,
    /// Per vertex: (edge index, multiplicity of inclusion), one entry per
    /// distinct incident edge.
    incidence: Vec<Vec<(usize, usize)>>,
}

impl Hypergraph {
    /// Builds a hypergraph from raw member lists; the vertex count is
    /// inferred as one past the largest id.
    pub fn new(edges: Vec<Vec<usize>>, allow_multi_inclusion: bool) -> Result<Self, BuildError> {
        Self::build(None, edges, allow_multi_inclusion)
    }

    /// As [`Hypergraph::new`] but with an explicit vertex count, so trailing
    /// isolated vertices can be represented.
    pub fn with_vertex_count(
        n: usize,
        edges: Vec<Vec<usize>>,
        allow_multi_inclusion: bool,
    ) -> Result<Self, BuildError> {
        Self::build(Some(n), edges, allow_multi_inclusion)
    }

    fn build(
        n_override: Option<usize>,
        raw_edges: Vec<Vec<usize>>,
        allow_multi_inclusion: bool,
    ) -> Result<Self, BuildError> {
        let mut required = 0usize;
        for (index, members) in raw_edges.iter().enumerate() {
            if members.is_empty() {
                return Err(BuildError::EmptyEdge { index });
            }
            if !allow_multi_inclusion {
                let mut sorted = members.clone();
                sorted.sort_unstable();
                if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                    return Err(BuildError::DuplicateVertex {
                        index,
                        vertex: w[0],
                    });
                }
            }
            let max = members.iter().copied().max().unwrap_or(0);
            required = required.max(max + 1);
        }
        let n = match n_override {
            Some(given) if given < required => {
                return Err(BuildError::VertexCountTooSmall { given, required })
            }
            Some(given) => given,
            None => required,
        };

        let mut degrees = vec![0usize; n];
        let mut incidence: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let edges: Vec<Hyperedge> = raw_edges
            .into_iter()
            .map(|members| Hyperedge { members })
            .collect();
        for (index, edge) in edges.iter().enumerate() {
            for &v in edge.members() {
                degrees[v] += 1;
                match incidence[v].last_mut() {
                    Some((e, mult)) if *e == index => *mult += 1,
                    _ => incidence[v].push((index, 1)),
                }
            }
        }
        Ok(Self {
            n,
            edges,
            degrees,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Hyperedge {
        &self.edges[index]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Number of (edge, inclusion) pairs containing `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// Distinct incident edges of `v` with their inclusion multiplicities.
    pub fn incidence(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).max().unwrap_or(0)
    }

    pub fn is_dyadic(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    /// Edge size k -> number of edges of that size.
    pub fn edge_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for edge in &self.edges {
            *hist.entry(edge.len()).or_insert(0) += 1;
        }
        hist
    }

    /// Member lists in build order, e.g. for serialization or rebuilds.
    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|e| e.members.clone()).collect()
    }
}
