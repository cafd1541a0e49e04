//! Exhaustive reference solvers used to check every other solver.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::min_edge_cover;
use crate::solution::MixedSolution;

/// Size caps beyond which the oracles refuse to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Vertex cap for subset enumeration (`brute_force_mds`, `brute_force_eds`);
    /// `distance2_brute` allows five more.
    pub max_n_subset: usize,
    /// Vertex cap for the `3^n` partition oracle, after isolated vertices are removed.
    pub max_n_partition: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_n_subset: 7, max_n_partition: 18 }
    }
}

fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
    if actual > cap {
        Err(Error::LimitExceeded { what, actual, cap })
    } else {
        Ok(())
    }
}

/// A graph with its isolated vertices split off. Every solver puts isolated
/// vertices into `D` and works on `core`.
#[derive(Debug, Clone)]
pub struct IsolatedSplit {
    pub core: Graph,
    /// `core` vertex id -> original id.
    pub map: Vec<usize>,
    pub isolated: Vec<usize>,
}

impl IsolatedSplit {
    pub fn new(g: &Graph) -> Self {
        let isolated = g.isolated_vertices();
        let keep: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
        let (core, map) = g.induced_subgraph(&keep);
        IsolatedSplit { core, map, isolated }
    }

    /// Maps a solution of `core` back to the original graph, adding the isolated vertices.
    pub fn lift(&self, g: &Graph, sol: &MixedSolution) -> MixedSolution {
        sol.lift(&self.core, g, &self.map).with_extra_vertices(&self.isolated)
    }
}

#[derive(Clone, Copy, Default)]
struct Dominates {
    vertices: u64,
    edges: u128,
}

impl Dominates {
    fn or(self, other: Dominates) -> Dominates {
        Dominates { vertices: self.vertices | other.vertices, edges: self.edges | other.edges }
    }
}

fn full_mask(g: &Graph) -> Dominates {
    Dominates {
        vertices: if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 },
        edges: if g.m() == 128 { u128::MAX } else { (1u128 << g.m()) - 1 },
    }
}

fn check_mask_capacity(g: &Graph) -> Result<()> {
    check_cap("vertices (mask width)", g.n(), 64)?;
    check_cap("edges (mask width)", g.m(), 128)
}

/// Picks `remaining` more items with index ≥ `start` so that the union covers `target`.
fn search_cover(
    items: &[Dominates],
    target: Dominates,
    start: usize,
    remaining: usize,
    acc: Dominates,
    picked: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        return acc.vertices == target.vertices && acc.edges == target.edges;
    }
    for i in start..items.len() {
        if items.len() - i < remaining {
            break;
        }
        picked.push(i);
        if search_cover(items, target, i + 1, remaining - 1, acc.or(items[i]), picked) {
            return true;
        }
        picked.pop();
    }
    false
}

fn smallest_cover(items: &[Dominates], target: Dominates) -> Vec<usize> {
    for size in 0..=items.len() {
        let mut picked = Vec::with_capacity(size);
        if search_cover(items, target, 0, size, Dominates::default(), &mut picked) {
            return picked;
        }
    }
    unreachable!("the full item set always covers the target")
}

/// Minimum mixed dominating set by enumerating all `(D, M)` of increasing
/// size. A vertex dominates itself, its neighbors and its incident edges; an
/// edge dominates itself, its endpoints and every edge sharing an endpoint.
pub fn brute_force_mds(g: &Graph, limits: OracleLimits) -> Result<MixedSolution> {
    check_cap("vertices", g.n(), limits.max_n_subset)?;
    check_mask_capacity(g)?;
    let n = g.n();
    let mut items = Vec::with_capacity(n + g.m());
    for v in 0..n {
        let mut dom = Dominates { vertices: 1 << v, edges: 0 };
        for &w in g.neighbors(v) {
            dom.vertices |= 1 << w;
            dom.edges |= 1 << g.edge_id(v, w).unwrap();
        }
        items.push(dom);
    }
    for &(u, v) in g.edges() {
        let mut dom = Dominates { vertices: (1 << u) | (1 << v), edges: 0 };
        for x in [u, v] {
            for &w in g.neighbors(x) {
                dom.edges |= 1 << g.edge_id(x, w).unwrap();
            }
        }
        items.push(dom);
    }
    let picked = smallest_cover(&items, full_mask(g));
    let d = picked.iter().copied().filter(|&i| i < n).collect();
    let m = picked.iter().copied().filter(|&i| i >= n).map(|i| i - n).collect();
    Ok(MixedSolution::new(d, m))
}

/// Minimum edge dominating set (edge ids) by subset enumeration.
pub fn brute_force_eds(g: &Graph, limits: OracleLimits) -> Result<Vec<usize>> {
    check_cap("vertices", g.n(), limits.max_n_subset)?;
    check_mask_capacity(g)?;
    let items: Vec<Dominates> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut dom = Dominates::default();
            for x in [u, v] {
                for &w in g.neighbors(x) {
                    dom.edges |= 1 << g.edge_id(x, w).unwrap();
                }
            }
            dom
        })
        .collect();
    let target = Dominates { vertices: 0, edges: full_mask(g).edges };
    Ok(smallest_cover(&items, target))
}

/// Minimum distance-2 dominating set by subset enumeration.
pub fn distance2_brute(g: &Graph, limits: OracleLimits) -> Result<Vec<usize>> {
    check_cap("vertices", g.n(), limits.max_n_subset + 5)?;
    check_cap("vertices (mask width)", g.n(), 64)?;
    let items: Vec<Dominates> = (0..g.n())
        .map(|v| {
            let mut ball = 1u64 << v;
            for &w in g.neighbors(v) {
                ball |= 1 << w;
                for &x in g.neighbors(w) {
                    ball |= 1 << x;
                }
            }
            Dominates { vertices: ball, edges: 0 }
        })
        .collect();
    let target = Dominates { vertices: full_mask(g).vertices, edges: 0 };
    Ok(smallest_cover(&items, target))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Unset,
    D,
    P,
    I,
}

struct PartitionSearch<'a> {
    g: &'a Graph,
    labels: Vec<Part>,
    /// `finishing[v]`: vertices whose closed neighborhood is fully labeled once `v` is.
    finishing: Vec<Vec<usize>>,
    best_size: usize,
    best: Option<MixedSolution>,
}

impl PartitionSearch<'_> {
    fn finished_ok(&self, w: usize) -> bool {
        let nbrs = self.g.neighbors(w);
        match self.labels[w] {
            Part::I => nbrs.iter().any(|&x| self.labels[x] == Part::D),
            Part::P => nbrs.iter().any(|&x| self.labels[x] == Part::P),
            _ => true,
        }
    }

    fn go(&mut self, v: usize, d: usize, p: usize) {
        if d + p.div_ceil(2) >= self.best_size {
            return;
        }
        let n = self.g.n();
        if v == n {
            self.complete(d);
            return;
        }
        for part in [Part::I, Part::P, Part::D] {
            if part == Part::I
                && self.g.neighbors(v).iter().any(|&w| w < v && self.labels[w] == Part::I)
            {
                continue;
            }
            self.labels[v] = part;
            if self.finishing[v].iter().all(|&w| self.finished_ok(w)) {
                let (nd, np) = match part {
                    Part::D => (d + 1, p),
                    Part::P => (d, p + 1),
                    _ => (d, p),
                };
                self.go(v + 1, nd, np);
            }
        }
        self.labels[v] = Part::Unset;
    }

    fn complete(&mut self, d: usize) {
        let p_set: Vec<usize> = (0..self.g.n()).filter(|&v| self.labels[v] == Part::P).collect();
        let (sub, map) = self.g.induced_subgraph(&p_set);
        let Some(cover) = min_edge_cover(&sub) else { return };
        let size = d + cover.len();
        if size < self.best_size {
            let d_set = (0..self.g.n()).filter(|&v| self.labels[v] == Part::D).collect();
            let sol = MixedSolution::new(d_set, Vec::new());
            let edges_sol = MixedSolution::new(Vec::new(), cover).lift(&sub, self.g, &map);
            self.best_size = size;
            self.best = Some(MixedSolution::new(sol.vertices().to_vec(), edges_sol.edges().to_vec()));
        }
    }
}

/// Exact optimum over all partitions `V = D ∪ P ∪ I` with `I` independent,
/// `I ⊆ N(D)` and `G[P]` free of isolated vertices, taking `M` as a minimum
/// edge cover of `G[P]`.
pub fn partition_oracle(g: &Graph, limits: OracleLimits) -> Result<MixedSolution> {
    let split = IsolatedSplit::new(g);
    let core = &split.core;
    check_cap("non-isolated vertices", core.n(), limits.max_n_partition)?;
    let n = core.n();
    let mut finishing = vec![Vec::new(); n];
    for w in 0..n {
        let last = core.neighbors(w).iter().copied().chain([w]).max().unwrap();
        finishing[last].push(w);
    }
    let mut search = PartitionSearch {
        g: core,
        labels: vec![Part::Unset; n],
        finishing,
        best_size: n + 1,
        best: None,
    };
    search.go(0, 0, 0);
    let best = search.best.unwrap_or_else(|| MixedSolution::new((0..n).collect(), Vec::new()));
    Ok(split.lift(g, &best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::validate_mds;

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_force_mds(&Graph::path(2), lim()).unwrap().size(), 1);
        assert_eq!(brute_force_mds(&Graph::path(4), lim()).unwrap().size(), 2);
        assert_eq!(brute_force_mds(&Graph::cycle(4).unwrap(), lim()).unwrap().size(), 2);
    }

    #[test]
    fn brute_refuses_large_graphs() {
        assert!(matches!(
            brute_force_mds(&Graph::path(8), lim()),
            Err(Error::LimitExceeded { actual: 8, cap: 7, .. })
        ));
        assert!(partition_oracle(&Graph::path(19), lim()).is_err());
        assert!(distance2_brute(&Graph::path(13), lim()).is_err());
    }

    #[test]
    fn partition_examples() {
        let p3 = partition_oracle(&Graph::path(3), lim()).unwrap();
        assert_eq!(p3, MixedSolution::new(vec![1], vec![]));
        assert_eq!(partition_oracle(&Graph::path(7), lim()).unwrap().size(), 3);
        assert_eq!(partition_oracle(&Graph::star(5), lim()).unwrap().size(), 1);
    }

    #[test]
    fn partition_handles_isolated_vertices() {
        let g = Graph::from_edges(7, (1..6).map(|i| (0, i))).unwrap();
        let sol = partition_oracle(&g, lim()).unwrap();
        assert_eq!(sol, MixedSolution::new(vec![0, 6], vec![]));
        assert!(validate_mds(&g, &sol).unwrap().valid);
    }

    #[test]
    fn distance2_examples() {
        assert_eq!(distance2_brute(&Graph::path(5), lim()).unwrap(), vec![2]);
        assert_eq!(distance2_brute(&Graph::path(3), lim()).unwrap().len(), 1);
        assert_eq!(distance2_brute(&Graph::cycle(7).unwrap(), lim()).unwrap().len(), 2);
    }

    #[test]
    fn eds_examples() {
        assert_eq!(brute_force_eds(&Graph::path(2), lim()).unwrap().len(), 1);
        assert_eq!(brute_force_eds(&Graph::path(4), lim()).unwrap(), vec![1]);
        assert_eq!(brute_force_eds(&Graph::empty(3), lim()).unwrap().len(), 0);
    }

    #[test]
    fn p7_brute_agrees() {
        let g = Graph::path(7);
        assert_eq!(brute_force_mds(&g, lim()).unwrap().size(), 3);
    }
}
