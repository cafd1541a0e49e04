//! Distance-2 domination over a nice tree decomposition of the incidence
//! graph, which yields a minimum mixed dominating set.

use std::time::Instant;

use serde::Serialize;

use crate::decomposition::{heuristic_decomposition, lift_to_incidence, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solution::MixedSolution;
use crate::transform::incidence_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    /// Endpoints of a graph edge, both in the bag.
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; the last node is the root, whose bag is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn count(&self, pred: impl Fn(&NiceKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }

    /// Structural checks for every node kind, plus: every edge of `h` is
    /// introduced exactly once and the root bag is empty.
    pub fn validate(&self, h: &Graph) -> Result<()> {
        let bad = |i: usize, msg: &str| Err(Error::Decomposition(format!("nice node {i}: {msg}")));
        if self.nodes.is_empty() || !self.nodes[self.root()].bag.is_empty() {
            return Err(Error::Decomposition("root bag must exist and be empty".into()));
        }
        let mut introduced = vec![0usize; h.m()];
        let mut parent_count = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return bad(i, "child does not precede its parent");
            }
            node.children.iter().for_each(|&c| parent_count[c] += 1);
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::Join => {
                    node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag
                }
                NiceKind::IntroduceVertex(v) => {
                    node.children.len() == 1 && {
                        let mut b = child_bag(0).clone();
                        b.push(v);
                        b.sort_unstable();
                        !child_bag(0).contains(&v) && b == node.bag
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let mut b = node.bag.clone();
                        b.push(v);
                        b.sort_unstable();
                        !node.bag.contains(&v) && b == *child_bag(0)
                    }
                }
                NiceKind::IntroduceEdge(u, v) => {
                    node.children.len() == 1
                        && *child_bag(0) == node.bag
                        && node.bag.contains(&u)
                        && node.bag.contains(&v)
                        && match h.edge_id(u, v) {
                            Some(e) => {
                                introduced[e] += 1;
                                true
                            }
                            None => false,
                        }
                }
            };
            if !ok {
                return bad(i, "malformed");
            }
        }
        if parent_count[..self.root()].iter().any(|&c| c != 1) {
            return Err(Error::Decomposition("nice nodes do not form a rooted tree".into()));
        }
        if let Some(e) = introduced.iter().position(|&c| c != 1) {
            return Err(Error::Decomposition(format!("edge {e} is introduced {} times", introduced[e])));
        }
        let mut forgotten = vec![0usize; h.n()];
        for node in &self.nodes {
            if let NiceKind::Forget(v) = node.kind {
                forgotten[v] += 1;
            }
        }
        if let Some(v) = forgotten.iter().position(|&c| c != 1) {
            return Err(Error::Decomposition(format!("vertex {v} is forgotten {} times", forgotten[v])));
        }
        Ok(())
    }
}

struct Builder<'a> {
    h: &'a Graph,
    nodes: Vec<NiceNode>,
    edge_done: Vec<bool>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, mut top: usize, v: usize) -> usize {
        let mut bag = self.nodes[top].bag.clone();
        let at = bag.binary_search(&v).unwrap_err();
        bag.insert(at, v);
        top = self.push(NiceKind::IntroduceVertex(v), bag, vec![top]);
        top
    }

    /// Introduces the pending edges at `v`, then forgets it.
    fn forget(&mut self, mut top: usize, v: usize) -> usize {
        let bag = self.nodes[top].bag.clone();
        for &w in self.h.neighbors(v) {
            if bag.binary_search(&w).is_ok() {
                let e = self.h.edge_id(v, w).unwrap();
                if !self.edge_done[e] {
                    self.edge_done[e] = true;
                    top = self.push(NiceKind::IntroduceEdge(v.min(w), v.max(w)), bag.clone(), vec![top]);
                }
            }
        }
        let smaller: Vec<usize> = bag.iter().copied().filter(|&x| x != v).collect();
        self.push(NiceKind::Forget(v), smaller, vec![top])
    }

    fn reshape(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            top = self.forget(top, v);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            top = self.introduce(top, v);
        }
        top
    }
}

/// Nice form of `td` rooted at bag 0: leaves are empty, each introduce or
/// forget changes one vertex, joins have two children with equal bags, and
/// each edge is introduced just before the first of its endpoints is forgotten.
pub fn make_nice_decomposition(td: &TreeDecomposition, h: &Graph) -> Result<NiceDecomposition> {
    td.validate(h)?;
    let mut b = Builder { h, nodes: Vec::new(), edge_done: vec![false; h.m()] };
    if td.bags.is_empty() {
        b.push(NiceKind::Leaf, vec![], vec![]);
        return Ok(NiceDecomposition { nodes: b.nodes });
    }
    let adj = td.adjacency();
    let mut order = Vec::with_capacity(td.len());
    let mut parent = vec![usize::MAX; td.len()];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut top = vec![usize::MAX; td.len()];
    for &x in order.iter().rev() {
        let target = &td.bags[x];
        let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| y != x && parent[y] == x).collect();
        let mut branches = Vec::with_capacity(kids.len().max(1));
        for y in kids {
            branches.push(b.reshape(top[y], target));
        }
        if branches.is_empty() {
            let leaf = b.push(NiceKind::Leaf, vec![], vec![]);
            branches.push(b.reshape(leaf, target));
        }
        let mut acc = branches[0];
        for &other in &branches[1..] {
            acc = b.push(NiceKind::Join, target.clone(), vec![acc, other]);
        }
        top[x] = acc;
    }
    let root = b.reshape(top[0], &[]);
    debug_assert_eq!(root, b.nodes.len() - 1);
    Ok(NiceDecomposition { nodes: b.nodes })
}

const SEL: usize = 0;
const D1_PEND: usize = 1;
const D1_OK: usize = 2;
const D2_PEND: usize = 3;
const D2_OK: usize = 4;
const INF: u32 = u32::MAX;

/// Bags above this size are refused by the DP.
pub const MAX_DP_BAG: usize = 11;
/// Cap on the total number of table entries kept for reconstruction.
pub const MAX_DP_ENTRIES: usize = 1 << 28;

fn pow5(k: usize) -> usize {
    5usize.pow(k as u32)
}

fn digit(idx: usize, pos: usize) -> usize {
    idx / pow5(pos) % 5
}

fn remove_digit(idx: usize, pos: usize) -> usize {
    let low = idx % pow5(pos);
    low + idx / pow5(pos + 1) * pow5(pos)
}

fn insert_digit(idx: usize, pos: usize, d: usize) -> usize {
    let low = idx % pow5(pos);
    low + d * pow5(pos) + idx / pow5(pos) * pow5(pos + 1)
}

fn is_ok(d: usize) -> bool {
    d == D1_OK || d == D2_OK
}

/// Whether a label `d` counts as witnessed across an edge to a label `other`.
fn upgradable(d: usize, other: usize) -> bool {
    match d {
        D1_OK => other == SEL,
        D2_OK => other == SEL || other == D1_PEND || other == D1_OK,
        _ => false,
    }
}

fn add(a: u32, b: u32) -> u32 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

struct Dp<'a> {
    nd: &'a NiceDecomposition,
    tables: Vec<Vec<u32>>,
    max_table: usize,
}

impl Dp<'_> {
    fn pos(&self, node: usize, v: usize) -> usize {
        self.nd.nodes[node].bag.binary_search(&v).expect("vertex in bag")
    }

    fn compute(&mut self, i: usize) {
        let node = &self.nd.nodes[i];
        let size = pow5(node.bag.len());
        self.max_table = self.max_table.max(size);
        let table = match node.kind {
            NiceKind::Leaf => vec![0],
            NiceKind::IntroduceVertex(v) => {
                let child = &self.tables[node.children[0]];
                let p = self.pos(i, v);
                (0..size)
                    .map(|c| match digit(c, p) {
                        SEL => add(child[remove_digit(c, p)], 1),
                        D1_PEND | D2_PEND => child[remove_digit(c, p)],
                        _ => INF,
                    })
                    .collect()
            }
            NiceKind::IntroduceEdge(a, b) => {
                let child = &self.tables[node.children[0]];
                let (pa, pb) = (self.pos(i, a), self.pos(i, b));
                (0..size)
                    .map(|c| {
                        let (da, db) = (digit(c, pa), digit(c, pb));
                        let mut best = child[c];
                        let down_a = upgradable(da, db);
                        let down_b = upgradable(db, da);
                        if down_a {
                            best = best.min(child[c - pow5(pa)]);
                        }
                        if down_b {
                            best = best.min(child[c - pow5(pb)]);
                        }
                        if down_a && down_b {
                            best = best.min(child[c - pow5(pa) - pow5(pb)]);
                        }
                        best
                    })
                    .collect()
            }
            NiceKind::Forget(v) => {
                let child = &self.tables[node.children[0]];
                let p = self.nd.nodes[node.children[0]].bag.binary_search(&v).unwrap();
                (0..size)
                    .map(|c| {
                        [SEL, D1_OK, D2_OK].iter().map(|&s| child[insert_digit(c, p, s)]).min().unwrap()
                    })
                    .collect()
            }
            NiceKind::Join => {
                let (l, r) = (&self.tables[node.children[0]], &self.tables[node.children[1]]);
                let b = node.bag.len();
                let mut offsets = Vec::with_capacity(1 << b);
                let mut ok_pows = Vec::with_capacity(b);
                (0..size)
                    .map(|c| {
                        ok_pows.clear();
                        let mut base = c;
                        let mut sel = 0u32;
                        for p in 0..b {
                            match digit(c, p) {
                                SEL => sel += 1,
                                d if is_ok(d) => {
                                    base -= pow5(p);
                                    ok_pows.push(pow5(p));
                                }
                                _ => {}
                            }
                        }
                        let floor = add(l[base], r[base]);
                        if floor == INF {
                            return INF;
                        }
                        let ok_sum: usize = ok_pows.iter().sum();
                        offsets.clear();
                        offsets.push(0usize);
                        for mask in 1usize..1 << ok_pows.len() {
                            let low = mask.trailing_zeros() as usize;
                            offsets.push(offsets[mask & (mask - 1)] + ok_pows[low]);
                        }
                        let mut best = INF;
                        for &off in &offsets {
                            let v = add(l[base + off], r[base + ok_sum - off]);
                            if v < best {
                                best = v;
                                if best == floor {
                                    break;
                                }
                            }
                        }
                        if best == INF {
                            INF
                        } else {
                            best - sel
                        }
                    })
                    .collect()
            }
        };
        debug_assert!(table.len() <= pow5(node.bag.len()));
        self.tables[i] = table;
    }

    /// Walks down from the root choosing, at each node, the first child
    /// state that reproduces the stored value.
    fn reconstruct(&self) -> Vec<usize> {
        let mut chosen = Vec::new();
        let mut stack = vec![(self.nd.root(), 0usize)];
        while let Some((i, c)) = stack.pop() {
            let node = &self.nd.nodes[i];
            let value = self.tables[i][c];
            match node.kind {
                NiceKind::Leaf => {}
                NiceKind::IntroduceVertex(v) => {
                    stack.push((node.children[0], remove_digit(c, self.pos(i, v))));
                }
                NiceKind::IntroduceEdge(a, b) => {
                    let child = &self.tables[node.children[0]];
                    let (pa, pb) = (self.pos(i, a), self.pos(i, b));
                    let (da, db) = (digit(c, pa), digit(c, pb));
                    let mut options = vec![c];
                    if upgradable(da, db) {
                        options.push(c - pow5(pa));
                    }
                    if upgradable(db, da) {
                        options.push(c - pow5(pb));
                    }
                    if upgradable(da, db) && upgradable(db, da) {
                        options.push(c - pow5(pa) - pow5(pb));
                    }
                    let c0 = *options.iter().find(|&&o| child[o] == value).expect("consistent table");
                    stack.push((node.children[0], c0));
                }
                NiceKind::Forget(v) => {
                    let child = &self.tables[node.children[0]];
                    let p = self.nd.nodes[node.children[0]].bag.binary_search(&v).unwrap();
                    let s = *[SEL, D1_OK, D2_OK]
                        .iter()
                        .find(|&&s| child[insert_digit(c, p, s)] == value)
                        .expect("consistent table");
                    if s == SEL {
                        chosen.push(v);
                    }
                    stack.push((node.children[0], insert_digit(c, p, s)));
                }
                NiceKind::Join => {
                    let (l, r) = (&self.tables[node.children[0]], &self.tables[node.children[1]]);
                    let b = node.bag.len();
                    let mut base = c;
                    let mut sel = 0u32;
                    let mut ok_pows = Vec::new();
                    for p in 0..b {
                        match digit(c, p) {
                            SEL => sel += 1,
                            d if is_ok(d) => {
                                base -= pow5(p);
                                ok_pows.push(pow5(p));
                            }
                            _ => {}
                        }
                    }
                    let ok_sum: usize = ok_pows.iter().sum();
                    let off = (0usize..1 << ok_pows.len())
                        .map(|mask| {
                            (0..ok_pows.len()).filter(|&j| mask >> j & 1 == 1).map(|j| ok_pows[j]).sum::<usize>()
                        })
                        .find(|&off| add(l[base + off], r[base + ok_sum - off]) == value + sel)
                        .expect("consistent table");
                    stack.push((node.children[0], base + off));
                    stack.push((node.children[1], base + ok_sum - off));
                }
            }
        }
        chosen.sort_unstable();
        chosen
    }
}

/// Statistics from one DP run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DpStats {
    pub nodes: usize,
    pub joins: usize,
    pub max_table: usize,
    pub optimum: usize,
}

/// A minimum distance-2 dominating set of `h`, computed over `nd`.
pub fn distance2_dp(h: &Graph, nd: &NiceDecomposition) -> Result<Vec<usize>> {
    distance2_dp_with_stats(h, nd).map(|(set, _)| set)
}

pub fn distance2_dp_with_stats(h: &Graph, nd: &NiceDecomposition) -> Result<(Vec<usize>, DpStats)> {
    nd.validate(h)?;
    let widest = nd.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0);
    if widest > MAX_DP_BAG {
        return Err(Error::LimitExceeded { what: "bag size for the DP", actual: widest, cap: MAX_DP_BAG });
    }
    let entries: usize = nd.nodes.iter().map(|n| pow5(n.bag.len())).sum();
    if entries > MAX_DP_ENTRIES {
        return Err(Error::LimitExceeded { what: "DP table entries", actual: entries, cap: MAX_DP_ENTRIES });
    }
    let mut dp = Dp { nd, tables: vec![Vec::new(); nd.nodes.len()], max_table: 0 };
    for i in 0..nd.nodes.len() {
        dp.compute(i);
    }
    let optimum = dp.tables[nd.root()][0];
    debug_assert_ne!(optimum, INF, "every graph has a distance-2 dominating set");
    let set = dp.reconstruct();
    debug_assert_eq!(set.len(), optimum as usize);
    let stats = DpStats {
        nodes: nd.nodes.len(),
        joins: nd.count(|k| *k == NiceKind::Join),
        max_table: dp.max_table,
        optimum: optimum as usize,
    };
    Ok((set, stats))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TreewidthStats {
    pub width: usize,
    pub lifted_width: usize,
    pub nice_nodes: usize,
    pub joins: usize,
    pub max_table: usize,
    pub best_size: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct TreewidthOutcome {
    pub solution: MixedSolution,
    pub stats: TreewidthStats,
}

/// Minimum mixed dominating set via the incidence graph. Uses `td` when
/// given, otherwise the elimination heuristic.
pub fn solve_treewidth(g: &Graph, td: Option<&TreeDecomposition>) -> Result<TreewidthOutcome> {
    let start = Instant::now();
    let owned;
    let td = match td {
        Some(td) => td,
        None => {
            owned = heuristic_decomposition(g);
            &owned
        }
    };
    let inc = incidence_graph(g);
    let lifted = lift_to_incidence(td, g)?;
    let nd = make_nice_decomposition(&lifted, &inc.graph)?;
    let (set, dp) = distance2_dp_with_stats(&inc.graph, &nd)?;
    let solution = inc.to_solution(&set);
    let stats = TreewidthStats {
        width: td.width(),
        lifted_width: lifted.width(),
        nice_nodes: dp.nodes,
        joins: dp.joins,
        max_table: dp.max_table,
        best_size: solution.size(),
        wall_ms: start.elapsed().as_millis() as u64,
    };
    Ok(TreewidthOutcome { solution, stats })
}
