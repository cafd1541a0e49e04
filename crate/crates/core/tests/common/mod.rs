#![allow(dead_code)]

use mdskit::Graph;

/// Every labeled simple graph on `n` vertices, in edge-mask order.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

/// Seeded G(n, p) graph.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    mdskit::gen_instance(mdskit::GenKind::Random { n, p, seed }).unwrap()
}

/// Proptest strategy: a graph on 1..=max_n vertices with each pair present
/// independently.
pub fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = Graph> {
    use proptest::prelude::*;
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, all.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Minimum number of edges covering every vertex, by a set-cover recursion
/// on the lowest uncovered vertex. `None` with an isolated vertex.
pub fn brute_min_edge_cover(g: &Graph) -> Option<usize> {
    fn go(g: &Graph, covered: u32, memo: &mut std::collections::HashMap<u32, Option<usize>>) -> Option<usize> {
        let full = (1u32 << g.n()) - 1;
        if covered == full {
            return Some(0);
        }
        if let Some(&r) = memo.get(&covered) {
            return r;
        }
        let v = (!covered).trailing_zeros() as usize;
        let best = g
            .neighbors(v)
            .iter()
            .filter_map(|&w| go(g, covered | 1 << v | 1 << w, memo).map(|c| c + 1))
            .min();
        memo.insert(covered, best);
        best
    }
    go(g, 0, &mut std::collections::HashMap::new())
}

/// A valid solution built from random bits: start from the chosen vertices
/// and edges, then add every still-undominated vertex, and an endpoint of
/// every still-undominated edge, to `D`.
pub fn repair_to_valid(g: &Graph, d_bits: &[bool], m_bits: &[bool]) -> mdskit::MixedSolution {
    let mut d: Vec<usize> = (0..g.n()).filter(|&v| d_bits.get(v) == Some(&true)).collect();
    let m: Vec<usize> = (0..g.m()).filter(|&e| m_bits.get(e) == Some(&true)).collect();
    loop {
        let sol = mdskit::MixedSolution::new(d.clone(), m.clone());
        let report = mdskit::validate_mds(g, &sol).unwrap();
        match report.violations.first() {
            None => return sol,
            Some(mdskit::Violation::UndominatedVertex(v)) => d.push(*v),
            Some(mdskit::Violation::UndominatedEdge(e)) => d.push(g.edge(*e).0),
        }
    }
}
