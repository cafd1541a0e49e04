//! Enumeration of minimal vertex covers as complements of maximal
//! independent sets (Bron–Kerbosch with Tomita pivoting on the complement).

use fixedbitset::FixedBitSet;

use crate::graph::Graph;

struct Frame {
    chosen: Vec<usize>,
    candidates: FixedBitSet,
    excluded: FixedBitSet,
    todo: Vec<usize>,
}

/// Lazy stream of every minimal vertex cover, each emitted once as a sorted
/// vertex list. Emission order is unspecified.
pub struct MinimalVertexCovers<'a> {
    g: &'a Graph,
    non_neighbors: Vec<FixedBitSet>,
    stack: Vec<Frame>,
    pending_root: bool,
}

impl<'a> MinimalVertexCovers<'a> {
    pub fn new(g: &'a Graph) -> Self {
        let n = g.n();
        let non_neighbors = (0..n)
            .map(|v| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert_range(..);
                row.set(v, false);
                g.neighbors(v).iter().for_each(|&w| row.set(w, false));
                row
            })
            .collect();
        MinimalVertexCovers { g, non_neighbors, stack: Vec::new(), pending_root: true }
    }

    fn make_frame(&self, chosen: Vec<usize>, candidates: FixedBitSet, excluded: FixedBitSet) -> Frame {
        let pivot = candidates
            .ones()
            .chain(excluded.ones())
            .max_by_key(|&u| (candidates.intersection_count(&self.non_neighbors[u]), std::cmp::Reverse(u)))
            .expect("frame has candidates or exclusions");
        let todo: Vec<usize> = candidates
            .ones()
            .filter(|&v| !self.non_neighbors[pivot].contains(v))
            .collect();
        Frame { chosen, candidates, excluded, todo: todo.into_iter().rev().collect() }
    }

    fn complement(&self, independent: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.g.n()];
        independent.iter().for_each(|&v| in_set[v] = true);
        (0..self.g.n()).filter(|&v| !in_set[v]).collect()
    }
}

impl Iterator for MinimalVertexCovers<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.pending_root {
            self.pending_root = false;
            let n = self.g.n();
            if n == 0 {
                return Some(Vec::new());
            }
            let mut all = FixedBitSet::with_capacity(n);
            all.insert_range(..);
            let root = self.make_frame(Vec::new(), all, FixedBitSet::with_capacity(n));
            self.stack.push(root);
        }
        while let Some(top) = self.stack.last_mut() {
            let Some(v) = top.todo.pop() else {
                self.stack.pop();
                continue;
            };
            let mut chosen = top.chosen.clone();
            chosen.push(v);
            let mut candidates = top.candidates.clone();
            candidates.intersect_with(&self.non_neighbors[v]);
            let mut excluded = top.excluded.clone();
            excluded.intersect_with(&self.non_neighbors[v]);
            top.candidates.set(v, false);
            top.excluded.insert(v);

            if candidates.is_clear() {
                if excluded.is_clear() {
                    chosen.sort_unstable();
                    return Some(self.complement(&chosen));
                }
                continue;
            }
            let frame = self.make_frame(chosen, candidates, excluded);
            self.stack.push(frame);
        }
        None
    }
}

pub fn minimal_vertex_covers(g: &Graph) -> MinimalVertexCovers<'_> {
    MinimalVertexCovers::new(g)
}

/// Whether `set` covers every edge and no vertex of it can be dropped.
pub fn is_minimal_vertex_cover(g: &Graph, set: &[usize]) -> bool {
    let mut in_set = vec![false; g.n()];
    set.iter().for_each(|&v| in_set[v] = true);
    if g.edges().iter().any(|&(u, v)| !in_set[u] && !in_set[v]) {
        return false;
    }
    set.iter().all(|&v| g.neighbors(v).iter().any(|&w| !in_set[w]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn covers(g: &Graph) -> BTreeSet<Vec<usize>> {
        let list: Vec<_> = minimal_vertex_covers(g).collect();
        let set: BTreeSet<_> = list.iter().cloned().collect();
        assert_eq!(set.len(), list.len(), "duplicate emission");
        set
    }

    #[test]
    fn triangle() {
        let expected: BTreeSet<_> = [vec![0, 1], vec![0, 2], vec![1, 2]].into_iter().collect();
        assert_eq!(covers(&Graph::complete(3)), expected);
    }

    #[test]
    fn single_edge() {
        let expected: BTreeSet<_> = [vec![0], vec![1]].into_iter().collect();
        assert_eq!(covers(&Graph::path(2)), expected);
    }

    #[test]
    fn edgeless_has_empty_cover() {
        let expected: BTreeSet<Vec<usize>> = [vec![]].into_iter().collect();
        assert_eq!(covers(&Graph::empty(3)), expected);
        assert_eq!(covers(&Graph::empty(0)), expected);
    }

    #[test]
    fn exhaustive_against_subsets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(1..=8usize);
            let p = rng.random_range(0.1..0.8);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.random_bool(p))
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let brute: BTreeSet<Vec<usize>> = (0u32..1 << n)
                .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
                .filter(|s| is_minimal_vertex_cover(&g, s))
                .collect();
            assert_eq!(covers(&g), brute);
        }
    }
}
