//! Tree decompositions: validation, a greedy elimination heuristic, and the
//! lift to the incidence graph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bags (sorted vertex lists) joined by tree edges over bag indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree: Vec<(usize, usize)>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Decomposition(msg.into())
}

impl TreeDecomposition {
    /// Sorts and dedups every bag.
    pub fn new(bags: Vec<Vec<usize>>, tree: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree }
    }

    /// `max |bag| − 1`, or 0 when every bag is empty.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Tree adjacency over bag indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks that the bags form a tree, cover every vertex and edge of `g`,
    /// and that each vertex occupies a connected set of bags.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let k = self.bags.len();
        if k == 0 {
            return if g.n() == 0 { Ok(()) } else { Err(bad("no bags")) };
        }
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
                return Err(bad(format!("bag {i} holds vertex {v}, graph has {} vertices", g.n())));
            }
            if bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad(format!("bag {i} is not sorted and duplicate-free")));
            }
        }
        if self.tree.len() != k - 1 {
            return Err(bad(format!("{} tree edges for {k} bags", self.tree.len())));
        }
        if let Some(&(a, b)) = self.tree.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
            return Err(bad(format!("tree edge ({a}, {b}) is malformed")));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if let Some(b) = seen.iter().position(|s| !s) {
            return Err(bad(format!("bag {b} is disconnected from bag 0")));
        }
        let mut bag_count = vec![0usize; g.n()];
        for bag in &self.bags {
            bag.iter().for_each(|&v| bag_count[v] += 1);
        }
        if let Some(v) = bag_count.iter().position(|&c| c == 0) {
            return Err(bad(format!("vertex {v} is in no bag")));
        }
        let mut shared_edges = vec![0usize; g.n()];
        for &(a, b) in &self.tree {
            for v in intersect(&self.bags[a], &self.bags[b]) {
                shared_edges[v] += 1;
            }
        }
        if let Some(v) = (0..g.n()).find(|&v| shared_edges[v] + 1 != bag_count[v]) {
            return Err(bad(format!("bags containing vertex {v} are not connected")));
        }
        let mut home: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            bag.iter().for_each(|&v| home[v].push(i));
        }
        for &(u, v) in g.edges() {
            if !home[u].iter().any(|&b| self.bags[b].binary_search(&v).is_ok()) {
                return Err(bad(format!("edge ({u}, {v}) is in no bag")));
            }
        }
        Ok(())
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Greedy min-degree elimination (ties broken by lowest id). Exact on
/// forests and cycles.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    eliminate(g, |fill, alive| {
        (0..fill.len()).filter(|&v| alive[v]).min_by_key(|&v| (fill[v].len(), v)).unwrap()
    })
}

/// Decomposition induced by eliminating the vertices in the given order,
/// which must be a permutation of `0..n`.
pub fn elimination_decomposition(g: &Graph, order: &[usize]) -> Result<TreeDecomposition> {
    let mut seen = vec![false; g.n()];
    if order.len() != g.n() || order.iter().any(|&v| v >= g.n() || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::Input("elimination order must be a permutation of the vertices".into()));
    }
    let mut next = order.iter().copied();
    Ok(eliminate(g, |_, _| next.next().unwrap()))
}

fn eliminate(g: &Graph, mut pick: impl FnMut(&[BTreeSet<usize>], &[bool]) -> usize) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut fill: Vec<BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut position = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later = Vec::with_capacity(n);
    for step in 0..n {
        let v = pick(&fill, &alive);
        alive[v] = false;
        position[v] = step;
        let nbrs: Vec<usize> = fill[v].iter().copied().collect();
        for &a in &nbrs {
            fill[a].remove(&v);
            for &b in &nbrs {
                if a != b {
                    fill[a].insert(b);
                }
            }
        }
        let mut bag = nbrs.clone();
        bag.push(v);
        bags.push(bag);
        later.push(nbrs);
    }
    let mut tree = Vec::with_capacity(n - 1);
    for (i, nbrs) in later.iter().enumerate().take(n - 1) {
        let parent = nbrs.iter().map(|&w| position[w]).min().unwrap_or(i + 1);
        tree.push((i, parent));
    }
    TreeDecomposition::new(bags, tree)
}

/// A decomposition of the incidence graph: every edge `e = (u, v)` gets a
/// bag `{u, v, n + e}` hung below a bag containing both endpoints.
pub fn lift_to_incidence(td: &TreeDecomposition, g: &Graph) -> Result<TreeDecomposition> {
    td.validate(g)?;
    let n = g.n();
    let mut home: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        bag.iter().for_each(|&v| home[v].push(i));
    }
    let mut bags = td.bags.clone();
    let mut tree = td.tree.clone();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let host = *home[u]
            .iter()
            .find(|&&b| td.bags[b].binary_search(&v).is_ok())
            .expect("validated decomposition covers every edge");
        bags.push(vec![u, v, n + e]);
        tree.push((host, bags.len() - 1));
    }
    Ok(TreeDecomposition::new(bags, tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::incidence_graph;

    fn path_decomposition(n: usize) -> TreeDecomposition {
        let bags = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let tree = (0..n.saturating_sub(2)).map(|i| (i, i + 1)).collect();
        TreeDecomposition::new(bags, tree)
    }

    #[test]
    fn validator_catches_each_defect() {
        let p3 = Graph::path(3);
        let good = path_decomposition(3);
        assert!(good.validate(&p3).is_ok());
        let missing_edge = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert!(missing_edge.validate(&p3).is_err());
        let split = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![0]],
            vec![(0, 1), (1, 2)],
        );
        assert!(split.validate(&p3).is_err());
        let forest = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(forest.validate(&p3).is_err());
    }

    #[test]
    fn heuristic_widths() {
        let tree = Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        for g in [tree, Graph::path(9), Graph::star(6)] {
            let td = heuristic_decomposition(&g);
            td.validate(&g).unwrap();
            assert_eq!(td.width(), 1);
        }
        let c6 = Graph::cycle(6).unwrap();
        let td = heuristic_decomposition(&c6);
        td.validate(&c6).unwrap();
        assert_eq!(td.width(), 2);
        let k4 = Graph::complete(4);
        let td = heuristic_decomposition(&k4);
        td.validate(&k4).unwrap();
        assert_eq!(td.width(), 3);
        let disconnected = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        heuristic_decomposition(&disconnected).validate(&disconnected).unwrap();
    }

    #[test]
    fn lift_examples() {
        let p3 = Graph::path(3);
        let lifted = lift_to_incidence(&path_decomposition(3), &p3).unwrap();
        lifted.validate(&incidence_graph(&p3).graph).unwrap();
        assert!(lifted.width() <= 2);

        let k3 = Graph::complete(3);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let lifted = lift_to_incidence(&td, &k3).unwrap();
        lifted.validate(&incidence_graph(&k3).graph).unwrap();
        assert_eq!(lifted.width(), 2);

        let single = Graph::empty(1);
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        assert_eq!(lift_to_incidence(&td, &single).unwrap(), td);
    }
}
