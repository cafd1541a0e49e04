//! Maximum matching on general graphs (Edmonds' blossom algorithm) and the
//! minimum edge cover derived from it.

use std::collections::VecDeque;

use crate::graph::Graph;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lowest_common_base(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);

        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.g.degree(v) {
                let to = self.g.neighbors(v)[idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lowest_common_base(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.g.n();
        // greedy warm start
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.g.neighbors(v).iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for v in 0..n {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(mut x) = self.find_path(v) {
                while x != NONE {
                    let pv = self.parent[x];
                    let next = self.mate[pv];
                    self.mate[x] = pv;
                    self.mate[pv] = x;
                    x = next;
                }
            }
        }
        self.mate
    }
}

/// Mate array of a maximum matching (`None` for unmatched vertices).
pub fn max_matching_mates(g: &Graph) -> Vec<Option<usize>> {
    Blossom::new(g)
        .run()
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// Edge ids of a maximum-cardinality matching.
pub fn max_matching(g: &Graph) -> Vec<usize> {
    let mates = max_matching_mates(g);
    let mut edges: Vec<usize> = mates
        .iter()
        .enumerate()
        .filter_map(|(v, m)| match m {
            Some(w) if v < *w => g.edge_id(v, *w),
            _ => None,
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Minimum edge cover as edge ids: a maximum matching plus the lowest-id
/// incident edge of each unmatched vertex. `None` when some vertex is
/// isolated. Its size is always `n - ν(g)`.
pub fn min_edge_cover(g: &Graph) -> Option<Vec<usize>> {
    if !g.isolated_vertices().is_empty() {
        return None;
    }
    let mates = max_matching_mates(g);
    let mut cover = Vec::with_capacity(g.n());
    for (v, m) in mates.iter().enumerate() {
        match m {
            Some(w) if v < *w => cover.push(g.edge_id(v, *w).expect("matched pair is an edge")),
            Some(_) => {}
            None => {
                let w = g.neighbors(v)[0];
                cover.push(g.edge_id(v, w).expect("neighbor pair is an edge"));
            }
        }
    }
    cover.sort_unstable();
    cover.dedup();
    Some(cover)
}

/// Fewest edges of `g` whose endpoints include every vertex of `required`:
/// a maximum matching of `G[required]` plus, for each unmatched required
/// vertex, the edge to its lowest-id neighbor. `None` when a required vertex
/// has no neighbor at all. Its size is `|required| - ν(G[required])`.
pub fn cover_vertices_with_edges(g: &Graph, required: &[usize]) -> Option<Vec<usize>> {
    let (sub, map) = g.induced_subgraph(required);
    let mates = max_matching_mates(&sub);
    let mut cover = Vec::with_capacity(sub.n());
    for (i, m) in mates.iter().enumerate() {
        let v = map[i];
        match m {
            Some(j) if i < *j => cover.push(g.edge_id(v, map[*j]).expect("matched pair is an edge")),
            Some(_) => {}
            None => {
                let w = *g.neighbors(v).first()?;
                cover.push(g.edge_id(v, w).expect("neighbor pair is an edge"));
            }
        }
    }
    cover.sort_unstable();
    cover.dedup();
    Some(cover)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_matching_size(g: &Graph) -> usize {
        let m = g.m();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let mut used = vec![false; g.n()];
            let mut ok = true;
            for e in 0..m {
                if mask >> e & 1 == 1 {
                    let (u, v) = g.edge(e);
                    if used[u] || used[v] {
                        ok = false;
                        break;
                    }
                    used[u] = true;
                    used[v] = true;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn small_matchings() {
        assert_eq!(max_matching(&Graph::complete(3)).len(), 1);
        let p4 = Graph::path(4);
        assert_eq!(max_matching(&p4), vec![0, 2]);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(brute_matching_size(&c5), 2);
        assert_eq!(max_matching(&c5).len(), 2);
    }

    #[test]
    fn blossom_needed() {
        // triangle 0-1-2 with pendant paths 2-3 and 0-4-5: perfect matching of size 3
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (0, 4), (4, 5)]).unwrap();
        assert_eq!(max_matching(&g).len(), 3);
        // Petersen graph has a perfect matching
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let petersen = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(max_matching(&petersen).len(), 5);
    }

    #[test]
    fn edge_cover_examples() {
        assert_eq!(min_edge_cover(&Graph::path(2)).unwrap().len(), 1);
        assert_eq!(min_edge_cover(&Graph::path(3)).unwrap().len(), 2);
        assert_eq!(min_edge_cover(&Graph::complete(3)).unwrap().len(), 2);
        assert_eq!(min_edge_cover(&Graph::empty(1)), None);
        assert_eq!(min_edge_cover(&Graph::empty(0)), Some(vec![]));
    }

    #[test]
    fn matching_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(1..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) && edges.len() < 16 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let matching = max_matching(&g);
            let mut used = vec![false; n];
            for &e in &matching {
                let (u, v) = g.edge(e);
                assert!(!used[u] && !used[v]);
                used[u] = true;
                used[v] = true;
            }
            assert_eq!(matching.len(), brute_matching_size(&g));
        }
    }
}
