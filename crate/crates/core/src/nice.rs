//! Nice mixed dominating sets: every vertex of `D` lies outside `V(M)` and
//! owns at least two private neighbors.

use std::collections::BTreeSet;

use crate::error::{contract, Error, Result};
use crate::graph::Graph;
use crate::solution::{is_valid, validate_mds, MixedSolution};

/// The `V = D ∪ P ∪ I` split induced by a nice solution, with `P = V(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicePartition {
    pub d: Vec<usize>,
    pub p: Vec<usize>,
    pub i: Vec<usize>,
    pub m: Vec<usize>,
}

impl NicePartition {
    /// Checks the partition invariants: disjoint cover of `V`, `V(M) = P`,
    /// `I` independent and dominated by `D`, two private neighbors per `D` vertex.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        const D: u8 = 1;
        const P: u8 = 2;
        const I: u8 = 3;
        let mut class = vec![0u8; g.n()];
        for (set, tag) in [(&self.d, D), (&self.p, P), (&self.i, I)] {
            for &v in set {
                g.check_vertex(v)?;
                if class[v] != 0 {
                    return Err(contract(format!("vertex {v} appears in two parts")));
                }
                class[v] = tag;
            }
        }
        if let Some(v) = class.iter().position(|&c| c == 0) {
            return Err(contract(format!("vertex {v} is in no part")));
        }
        let mut covered = vec![false; g.n()];
        for &e in &self.m {
            if e >= g.m() {
                return Err(Error::EdgeOutOfRange { edge: e, m: g.m() });
            }
            let (u, v) = g.edge(e);
            covered[u] = true;
            covered[v] = true;
        }
        if (0..g.n()).any(|v| covered[v] != (class[v] == P)) {
            return Err(contract("V(M) differs from P"));
        }
        for &v in &self.i {
            if g.neighbors(v).iter().any(|&w| class[w] == I) {
                return Err(contract(format!("I is not independent at {v}")));
            }
            if !g.neighbors(v).iter().any(|&w| class[w] == D) {
                return Err(contract(format!("vertex {v} of I has no neighbor in D")));
            }
        }
        let in_d: Vec<bool> = class.iter().map(|&c| c == D).collect();
        let ind: Vec<bool> = class.iter().map(|&c| c == I).collect();
        for &u in &self.d {
            if private_neighbors(g, &in_d, &ind, u).len() < 2 {
                return Err(contract(format!("vertex {u} of D has fewer than two private neighbors")));
            }
        }
        Ok(())
    }

    pub fn solution(&self) -> MixedSolution {
        MixedSolution::new(self.d.clone(), self.m.clone())
    }
}

/// Neighbors `v` of `u` with `v ∈ I` and `N(v) ∩ D = {u}`.
fn private_neighbors(g: &Graph, in_d: &[bool], in_i: &[bool], u: usize) -> Vec<usize> {
    g.neighbors(u)
        .iter()
        .copied()
        .filter(|&v| in_i[v] && g.neighbors(v).iter().filter(|&&w| in_d[w]).count() == 1)
        .collect()
}

fn require_valid(g: &Graph, sol: &MixedSolution) -> Result<()> {
    let report = validate_mds(g, sol)?;
    if report.valid {
        Ok(())
    } else {
        Err(contract(format!(
            "solution is not a mixed dominating set ({} violations)",
            report.violation_count
        )))
    }
}

/// Returns the nice partition of `sol` if it is nice, `None` otherwise.
pub fn is_nice(g: &Graph, sol: &MixedSolution) -> Result<Option<NicePartition>> {
    require_valid(g, sol)?;
    let in_d = sol.vertex_mask(g.n());
    let in_p = sol.covered_mask(g);
    if (0..g.n()).any(|v| in_d[v] && in_p[v]) {
        return Ok(None);
    }
    let in_i: Vec<bool> = (0..g.n()).map(|v| !in_d[v] && !in_p[v]).collect();
    if sol.vertices().iter().any(|&u| private_neighbors(g, &in_d, &in_i, u).len() < 2) {
        return Ok(None);
    }
    Ok(Some(NicePartition {
        d: sol.vertices().to_vec(),
        p: (0..g.n()).filter(|&v| in_p[v]).collect(),
        i: (0..g.n()).filter(|&v| in_i[v]).collect(),
        m: sol.edges().to_vec(),
    }))
}

struct Editable<'a> {
    g: &'a Graph,
    d: BTreeSet<usize>,
    m: BTreeSet<usize>,
}

impl Editable<'_> {
    fn snapshot(&self) -> MixedSolution {
        MixedSolution::new(self.d.iter().copied().collect(), self.m.iter().copied().collect())
    }

    fn covered(&self) -> Vec<bool> {
        let mut mask = vec![false; self.g.n()];
        for &e in &self.m {
            let (u, v) = self.g.edge(e);
            mask[u] = true;
            mask[v] = true;
        }
        mask
    }

    fn in_d(&self) -> Vec<bool> {
        let mut mask = vec![false; self.g.n()];
        self.d.iter().for_each(|&v| mask[v] = true);
        mask
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.m.insert(self.g.edge_id(u, v).expect("neighbors share an edge"));
    }
}

/// Transforms a valid solution into a nice one of no larger size.
///
/// First makes `D` disjoint from `V(M)`: a conflicting `u ∈ D` is dropped
/// when the rest still dominates, otherwise one `M`-edge `(u, w)` at `u` is
/// traded for `w ∈ D`. Then, while some `u ∈ D` has fewer than two private
/// neighbors, `u` is replaced by an edge to its private neighbor, deleted
/// (when `N(u) ⊆ D`), or replaced by an edge to its lowest-id neighbor
/// outside `D`.
pub fn make_nice(g: &Graph, sol: &MixedSolution) -> Result<MixedSolution> {
    if let Some(&v) = g.isolated_vertices().first() {
        return Err(Error::IsolatedVertex(v));
    }
    require_valid(g, sol)?;
    let mut st = Editable {
        g,
        d: sol.vertices().iter().copied().collect(),
        m: sol.edges().iter().copied().collect(),
    };

    loop {
        let covered = st.covered();
        let Some(&u) = st.d.iter().find(|&&u| covered[u]) else { break };
        st.d.remove(&u);
        if is_valid(g, &st.snapshot()) {
            continue;
        }
        let e = *st
            .m
            .iter()
            .find(|&&e| {
                let (a, b) = g.edge(e);
                a == u || b == u
            })
            .expect("u is covered by some M-edge");
        let (a, b) = g.edge(e);
        st.m.remove(&e);
        st.d.insert(u);
        st.d.insert(if a == u { b } else { a });
        debug_assert!(is_valid(g, &st.snapshot()));
    }

    loop {
        let in_d = st.in_d();
        let covered = st.covered();
        let in_i: Vec<bool> = (0..g.n()).map(|v| !in_d[v] && !covered[v]).collect();
        let lacking = st.d.iter().find_map(|&u| {
            let private = private_neighbors(g, &in_d, &in_i, u);
            (private.len() < 2).then_some((u, private))
        });
        let Some((u, private)) = lacking else { break };
        st.d.remove(&u);
        match private.as_slice() {
            [v] => st.add_edge(u, *v),
            _ => {
                if let Some(&v) = g.neighbors(u).iter().find(|&&v| !in_d[v]) {
                    st.add_edge(u, v);
                }
            }
        }
        debug_assert!(is_valid(g, &st.snapshot()));
    }

    let out = st.snapshot();
    debug_assert!(out.size() <= sol.size());
    debug_assert!(matches!(is_nice(g, &out), Ok(Some(_))));
    Ok(out)
}

/// A minimal vertex cover `C` with `D ⊆ C ⊆ D ∪ P`, obtained by greedily
/// shrinking `D ∪ P`, trying low-degree vertices first (ties by id).
pub fn sandwiched_minimal_vc(g: &Graph, part: &NicePartition) -> Result<Vec<usize>> {
    part.validate(g)?;
    let mut in_c = vec![false; g.n()];
    part.d.iter().chain(&part.p).for_each(|&v| in_c[v] = true);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    for v in order {
        if in_c[v] && g.neighbors(v).iter().all(|&w| in_c[w]) {
            in_c[v] = false;
        }
    }
    let cover: Vec<usize> = (0..g.n()).filter(|&v| in_c[v]).collect();
    if let Some(&u) = part.d.iter().find(|&&u| !in_c[u]) {
        return Err(contract(format!("vertex {u} of D left the cover")));
    }
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(d: &[usize], m: &[usize]) -> MixedSolution {
        MixedSolution::new(d.to_vec(), m.to_vec())
    }

    #[test]
    fn is_nice_examples() {
        let star = Graph::star(3);
        let part = is_nice(&star, &sol(&[0], &[])).unwrap().unwrap();
        assert_eq!(part.i, vec![1, 2, 3]);

        let p4 = Graph::path(4);
        assert_eq!(is_nice(&p4, &sol(&[1, 2], &[])).unwrap(), None);

        let k2 = Graph::path(2);
        let part = is_nice(&k2, &sol(&[], &[0])).unwrap().unwrap();
        assert_eq!(part.p, vec![0, 1]);
    }

    #[test]
    fn is_nice_rejects_invalid_input() {
        let p3 = Graph::path(3);
        assert!(matches!(is_nice(&p3, &sol(&[], &[0])), Err(Error::Contract(_))));
    }

    #[test]
    fn make_nice_p4_trace() {
        // u=1 has one private neighbor (0) -> edge (0,1); then u=2 has one (3) -> edge (2,3)
        let p4 = Graph::path(4);
        let out = make_nice(&p4, &sol(&[1, 2], &[])).unwrap();
        assert_eq!(out, MixedSolution::from_pairs(&p4, vec![], &[(0, 1), (2, 3)]).unwrap());
        assert!(is_nice(&p4, &out).unwrap().is_some());
    }

    #[test]
    fn make_nice_keeps_star() {
        let star = Graph::star(3);
        assert_eq!(make_nice(&star, &sol(&[0], &[])).unwrap(), sol(&[0], &[]));
    }

    #[test]
    fn make_nice_k2_both_endpoints() {
        let k2 = Graph::path(2);
        let out = make_nice(&k2, &sol(&[0, 1], &[])).unwrap();
        assert_eq!(out.size(), 1);
        assert!(is_nice(&k2, &out).unwrap().is_some());
    }

    #[test]
    fn make_nice_resolves_d_m_overlap() {
        // P3 with D = {1} and M = {(0,1)}: vertex 1 is dropped from D only if valid
        let p3 = Graph::path(3);
        let out = make_nice(&p3, &sol(&[1], &[0])).unwrap();
        assert!(out.size() <= 2);
        assert!(is_nice(&p3, &out).unwrap().is_some());
    }

    #[test]
    fn make_nice_preconditions() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(make_nice(&g, &sol(&[0, 2], &[])), Err(Error::IsolatedVertex(2)));
        let p3 = Graph::path(3);
        assert!(matches!(make_nice(&p3, &sol(&[], &[0])), Err(Error::Contract(_))));
    }

    #[test]
    fn sandwich_examples() {
        let p3 = Graph::path(3);
        let part = NicePartition { d: vec![1], p: vec![], i: vec![0, 2], m: vec![] };
        assert_eq!(sandwiched_minimal_vc(&p3, &part).unwrap(), vec![1]);

        let p4 = Graph::path(4);
        let part = NicePartition { d: vec![], p: vec![0, 1, 2, 3], i: vec![], m: vec![0, 2] };
        assert_eq!(sandwiched_minimal_vc(&p4, &part).unwrap(), vec![1, 2]);

        let k2 = Graph::path(2);
        let part = NicePartition { d: vec![], p: vec![0, 1], i: vec![], m: vec![0] };
        let c = sandwiched_minimal_vc(&k2, &part).unwrap();
        assert!(c == vec![0] || c == vec![1]);
    }

    #[test]
    fn sandwich_rejects_bad_partition() {
        let p3 = Graph::path(3);
        let part = NicePartition { d: vec![1], p: vec![], i: vec![0], m: vec![] };
        assert!(sandwiched_minimal_vc(&p3, &part).is_err());
    }
}
