use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A candidate mixed dominating set: vertices `D` plus edges `M`
/// (edge ids of the host graph). Both lists are kept sorted and free of
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MixedSolution {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl MixedSolution {
    pub fn new(mut vertices: Vec<usize>, mut edges: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        MixedSolution { vertices, edges }
    }

    /// Builds a solution from endpoint pairs, resolving each pair to its edge id.
    pub fn from_pairs(g: &Graph, vertices: Vec<usize>, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| g.edge_id(u, v).ok_or(Error::NoSuchEdge { u, v }))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedSolution::new(vertices, edges))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    /// Endpoint pairs of `M`.
    pub fn edge_pairs(&self, g: &Graph) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&e| g.edge(e)).collect()
    }

    /// `V(M)` as a membership vector.
    pub fn covered_mask(&self, g: &Graph) -> Vec<bool> {
        let mut mask = vec![false; g.n()];
        for &e in &self.edges {
            let (u, v) = g.edge(e);
            mask[u] = true;
            mask[v] = true;
        }
        mask
    }

    pub fn vertex_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        self.vertices.iter().for_each(|&v| mask[v] = true);
        mask
    }

    pub fn check_ids(&self, g: &Graph) -> Result<()> {
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= g.n()) {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if let Some(&e) = self.edges.iter().find(|&&e| e >= g.m()) {
            return Err(Error::EdgeOutOfRange { edge: e, m: g.m() });
        }
        Ok(())
    }

    /// Re-expresses a solution of an induced subgraph in the ids of its host.
    /// `vertex_map[i]` is the host id of subgraph vertex `i`.
    pub fn lift(&self, sub: &Graph, host: &Graph, vertex_map: &[usize]) -> MixedSolution {
        let vertices = self.vertices.iter().map(|&v| vertex_map[v]).collect();
        let edges = self
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = sub.edge(e);
                host.edge_id(vertex_map[u], vertex_map[v])
                    .expect("induced subgraph edge exists in host")
            })
            .collect();
        MixedSolution::new(vertices, edges)
    }

    /// Adds vertices to `D`.
    pub fn with_extra_vertices(&self, extra: &[usize]) -> MixedSolution {
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(extra);
        MixedSolution::new(vertices, self.edges.clone())
    }
}

/// `|D| + |P|/2`, stored in half units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct Cost {
    halves: usize,
}

impl Cost {
    pub fn new(d: usize, p: usize) -> Self {
        Cost { halves: 2 * d + p }
    }

    pub fn halves(self) -> usize {
        self.halves
    }

    pub fn as_f64(self) -> f64 {
        self.halves as f64 / 2.0
    }

    /// Whether the cost is at most the integer budget `k`.
    pub fn within(self, k: usize) -> bool {
        self.halves <= 2 * k
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost { halves: self.halves + rhs.halves }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.halves.is_multiple_of(2) {
            write!(f, "{}", self.halves / 2)
        } else {
            write!(f, "{}.5", self.halves / 2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Vertex outside `D ∪ V(M)` with no neighbor in `D`.
    UndominatedVertex(usize),
    /// Edge outside `M` with no endpoint in `D ∪ V(M)`, given by edge id.
    UndominatedEdge(usize),
}

/// Result of [`validate_mds`]. At most [`ValidationReport::MAX_LISTED`]
/// violations are listed; `violation_count` is always exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
}

impl ValidationReport {
    pub const MAX_LISTED: usize = 100;
}

/// Checks both domination conditions of a mixed dominating set.
pub fn validate_mds(g: &Graph, sol: &MixedSolution) -> Result<ValidationReport> {
    sol.check_ids(g)?;
    let in_d = sol.vertex_mask(g.n());
    let in_vm = sol.covered_mask(g);
    let mut in_m = vec![false; g.m()];
    sol.edges().iter().for_each(|&e| in_m[e] = true);

    let mut violations = Vec::new();
    let mut count = 0usize;
    let mut record = |v: Violation| {
        count += 1;
        if violations.len() < ValidationReport::MAX_LISTED {
            violations.push(v);
        }
    };

    for v in 0..g.n() {
        if in_d[v] || in_vm[v] {
            continue;
        }
        if !g.neighbors(v).iter().any(|&w| in_d[w]) {
            record(Violation::UndominatedVertex(v));
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if in_m[e] {
            continue;
        }
        if !(in_d[u] || in_d[v] || in_vm[u] || in_vm[v]) {
            record(Violation::UndominatedEdge(e));
        }
    }
    Ok(ValidationReport { valid: count == 0, violations, violation_count: count })
}

pub(crate) fn is_valid(g: &Graph, sol: &MixedSolution) -> bool {
    validate_mds(g, sol).map(|r| r.valid).unwrap_or(false)
}
