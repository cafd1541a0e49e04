//! q-CSP-5 instances and the gadget graph whose pathwidth-bounded MDS
//! instances encode them, together with a witness solution builder and a
//! path decomposition emitter.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::decomposition::TreeDecomposition;
use crate::error::{contract, Error, Result};
use crate::graph::Graph;
use crate::solution::MixedSolution;

/// Number of copies of each consistency gadget.
pub const A_COPIES: usize = 12;
/// Refuse to materialize constructions beyond this many vertices.
pub const MAX_CONSTRUCTION_VERTICES: usize = 20_000_000;

/// One constraint: a tuple of distinct variables (0-indexed) and its list
/// of allowed assignments, each a value in `0..5` per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub vars: Vec<usize>,
    pub assignments: Vec<Vec<u8>>,
}

impl Constraint {
    pub fn allows(&self, rho: &[u8]) -> bool {
        self.assignments.iter().any(|a| self.agrees(a, rho))
    }

    fn agrees(&self, a: &[u8], rho: &[u8]) -> bool {
        self.vars.iter().zip(a).all(|(&x, &v)| rho[x] == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csp5Instance {
    pub n: usize,
    pub q: usize,
    pub constraints: Vec<Constraint>,
}

/// `5^q - 1`, the normalized list length.
pub fn list_len(q: usize) -> usize {
    5usize.pow(q as u32) - 1
}

impl Csp5Instance {
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || self.q > 6 {
            return Err(Error::Csp(format!("arity q = {} must lie in 1..=6", self.q)));
        }
        for (j, c) in self.constraints.iter().enumerate() {
            if c.vars.is_empty() || c.vars.len() > self.q {
                return Err(Error::Csp(format!("constraint {j} has {} variables, q = {}", c.vars.len(), self.q)));
            }
            if let Some(&x) = c.vars.iter().find(|&&x| x >= self.n) {
                return Err(Error::Csp(format!("constraint {j} uses variable {} of {}", x + 1, self.n)));
            }
            if c.vars.iter().collect::<BTreeSet<_>>().len() != c.vars.len() {
                return Err(Error::Csp(format!("constraint {j} repeats a variable")));
            }
            for a in &c.assignments {
                if a.len() != c.vars.len() {
                    return Err(Error::Csp(format!("constraint {j} has an assignment of the wrong length")));
                }
                if a.iter().any(|&v| v > 4) {
                    return Err(Error::Csp(format!("constraint {j} has a value outside 0..=4")));
                }
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.validate().is_ok()
            && self
                .constraints
                .iter()
                .all(|c| c.vars.len() == self.q && c.assignments.len() == list_len(self.q))
    }

    /// Index of the first constraint violated by `rho`.
    pub fn first_violation(&self, rho: &[u8]) -> Option<usize> {
        self.constraints.iter().position(|c| !c.allows(rho))
    }

    /// Exhaustive search over all `5^n` assignments; for tiny instances.
    pub fn brute_force_satisfiable(&self) -> Option<Vec<u8>> {
        let total = 5usize.checked_pow(self.n as u32)?;
        (0..total).find_map(|code| {
            let rho: Vec<u8> = (0..self.n).map(|i| (code / 5usize.pow(i as u32) % 5) as u8).collect();
            self.first_violation(&rho).is_none().then_some(rho)
        })
    }
}

/// Pads every constraint to exactly `q` variables and `5^q - 1` listed
/// assignments. Padding variables are the lowest-id variables not already
/// in the constraint, with fresh variables appended when there are too few.
/// Padded positions take every value. A constraint with all `5^q`
/// assignments allowed is dropped; one with no allowed assignment is an error.
pub fn normalize_csp(c: &Csp5Instance) -> Result<Csp5Instance> {
    c.validate()?;
    let q = c.q;
    let cap = list_len(q);
    let mut n = c.n;
    let mut constraints = Vec::with_capacity(c.m());
    for (j, con) in c.constraints.iter().enumerate() {
        if con.assignments.is_empty() {
            return Err(Error::Csp(format!("constraint {j} allows no assignment")));
        }
        if con.vars.len() == q && con.assignments.len() == cap {
            constraints.push(con.clone());
            continue;
        }
        let mut vars = con.vars.clone();
        let mut candidate = 0;
        while vars.len() < q {
            if candidate >= n {
                n += 1;
            }
            if !vars.contains(&candidate) {
                vars.push(candidate);
            }
            candidate += 1;
        }
        let extra = q - con.vars.len();
        let mut assignments = Vec::new();
        for a in &con.assignments {
            for code in 0..5usize.pow(extra as u32) {
                let mut full = a.clone();
                full.extend((0..extra).map(|t| (code / 5usize.pow(t as u32) % 5) as u8));
                assignments.push(full);
            }
        }
        if assignments.len() > cap {
            let mut seen = BTreeSet::new();
            assignments.retain(|a| seen.insert(a.clone()));
            if assignments.len() > cap {
                continue;
            }
        }
        let first = assignments[0].clone();
        assignments.resize(cap, first);
        constraints.push(Constraint { vars, assignments });
    }
    Ok(Csp5Instance { n, q, constraints })
}

/// A random normalized instance satisfied by a planted assignment, which
/// is returned alongside. Needs `1 <= q <= n`.
pub fn random_satisfiable_csp<R: RngCore>(
    n: usize,
    m: usize,
    q: usize,
    rng: &mut R,
) -> Result<(Csp5Instance, Vec<u8>)> {
    if q == 0 || q > n || q > 6 {
        return Err(Error::Input(format!("need 1 <= q <= n and q <= 6, got n = {n}, q = {q}")));
    }
    let rho: Vec<u8> = (0..n).map(|_| rng.random_range(0..5)).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut constraints = Vec::with_capacity(m);
    for _ in 0..m {
        let vars: Vec<usize> = all.choose_multiple(rng, q).copied().collect();
        let planted: Vec<u8> = vars.iter().map(|&x| rho[x]).collect();
        let extra = rng.random_range(0..list_len(q));
        let mut assignments = vec![planted];
        for _ in 0..extra {
            assignments.push((0..q).map(|_| rng.random_range(0..5)).collect());
        }
        assignments.shuffle(rng);
        constraints.push(Constraint { vars, assignments });
    }
    let c = normalize_csp(&Csp5Instance { n, q, constraints })?;
    Ok((c, rho))
}

/// Construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SethParams {
    pub n: usize,
    pub m: usize,
    pub q: usize,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub k: usize,
    /// Size of every pendant set actually built.
    pub pendant_size: usize,
    /// The override, when one was given.
    pub pendant_multiplier: Option<usize>,
}

impl SethParams {
    pub fn new(n: usize, m: usize, q: usize, pendant_multiplier: Option<usize>) -> Self {
        let f = (4 * n + 1) * (2 * n + 1);
        let a = A_COPIES;
        let c = list_len(q);
        let k = 8 * a * f * m * n + 2 * f * m * n + 2 * f * m * q * (c - 1) + n + 1;
        SethParams { n, m, q, f, a, c, k, pendant_size: pendant_multiplier.unwrap_or(2 * k + 1), pendant_multiplier }
    }

    /// Number of sections (checker gadgets).
    pub fn sections(&self) -> usize {
        self.f * self.m
    }

    pub fn path_len(&self) -> usize {
        5 * self.sections()
    }

    pub fn z_per_section(&self) -> usize {
        2 * self.q * self.c
    }

    pub fn w_per_section(&self) -> usize {
        2 * self.q * (self.c - 1)
    }

    pub fn h_block(&self) -> usize {
        self.z_per_section() + self.w_per_section() * (1 + self.pendant_size)
    }

    pub fn q_block(&self) -> usize {
        18 + 8 * self.pendant_size
    }

    /// Closed-form vertex count of the construction.
    pub fn vertex_count(&self) -> usize {
        let main = self.n * self.path_len();
        let checkers = self.sections() * (self.z_per_section() + self.w_per_section() * (1 + self.pendant_size));
        let consistency = self.n * self.sections() * self.a * (18 + 8 * self.pendant_size);
        3 + main + checkers + consistency
    }

    pub fn is_faithful(&self) -> bool {
        self.pendant_size == 2 * self.k + 1
    }
}

/// The built graph, its budget, and the id layout of every gadget.
///
/// Ids are assigned in the order: main paths, checker gadgets by section
/// (Z sets, then W, then W pendants), consistency gadget copies ordered by
/// (variable, section, copy), and finally `s`, `s1`, `s2`.
#[derive(Debug, Clone)]
pub struct ConstructionOutput {
    pub graph: Graph,
    pub params: SethParams,
    pub csp: Csp5Instance,
    h_offset: usize,
    q_offset: usize,
}

impl ConstructionOutput {
    pub fn k(&self) -> usize {
        self.params.k
    }

    /// `u_{i,j}`, with `i` 0-indexed.
    pub fn u(&self, i: usize, j: usize) -> usize {
        i * self.params.path_len() + j
    }

    pub fn h_start(&self, section: usize) -> usize {
        self.h_offset + section * self.params.h_block()
    }

    /// Start id of every checker gadget block.
    pub fn section_offsets(&self) -> Vec<usize> {
        (0..self.params.sections()).map(|j| self.h_start(j)).collect()
    }

    /// `z^{which+1}_{σ,j,i}` where `slot` is the position of `x_i` in the constraint.
    pub fn z(&self, section: usize, sigma: usize, slot: usize, which: usize) -> usize {
        self.h_start(section) + sigma * 2 * self.params.q + 2 * slot + which
    }

    pub fn z_set(&self, section: usize, sigma: usize) -> std::ops::Range<usize> {
        let start = self.z(section, sigma, 0, 0);
        start..start + 2 * self.params.q
    }

    pub fn w(&self, section: usize, t: usize) -> usize {
        self.h_start(section) + self.params.z_per_section() + t
    }

    pub fn w_pendants(&self, section: usize, t: usize) -> std::ops::Range<usize> {
        let p = self.params.pendant_size;
        let start = self.h_start(section) + self.params.z_per_section() + self.params.w_per_section() + t * p;
        start..start + p
    }

    fn q_start(&self, i: usize, section: usize, copy: usize) -> usize {
        self.q_offset + ((i * self.params.sections() + section) * self.params.a + copy) * self.params.q_block()
    }

    pub fn a_set(&self, i: usize, section: usize, copy: usize) -> std::ops::Range<usize> {
        let start = self.q_start(i, section, copy);
        start..start + 8
    }

    /// Vertex `t` (0 or 1) of `B_{i,j,ℓ}` in the given copy.
    pub fn b(&self, i: usize, section: usize, copy: usize, ell: usize, t: usize) -> usize {
        self.q_start(i, section, copy) + 8 + 2 * ell + t
    }

    pub fn a_pendants(&self, i: usize, section: usize, copy: usize, t: usize) -> std::ops::Range<usize> {
        let p = self.params.pendant_size;
        let start = self.q_start(i, section, copy) + 18 + t * p;
        start..start + p
    }

    pub fn s(&self) -> usize {
        self.graph.n() - 3
    }

    pub fn s_leaves(&self) -> [usize; 2] {
        let n = self.graph.n();
        [n - 2, n - 1]
    }

    fn constraint_of(&self, section: usize) -> &Constraint {
        &self.csp.constraints[section % self.params.m]
    }
}

/// Builds the gadget graph for a normalized instance. `pendant_multiplier`
/// replaces the pendant set size `2k+1` when given.
pub fn build_seth_instance(c: &Csp5Instance, pendant_multiplier: Option<usize>) -> Result<ConstructionOutput> {
    if !c.is_normalized() {
        return Err(contract("the CSP instance must be normalized"));
    }
    if pendant_multiplier == Some(0) {
        return Err(Error::Input("pendant multiplier must be positive".into()));
    }
    let params = SethParams::new(c.n, c.m(), c.q, pendant_multiplier);
    let total = params.vertex_count();
    if total > MAX_CONSTRUCTION_VERTICES {
        return Err(Error::LimitExceeded { what: "construction vertices", actual: total, cap: MAX_CONSTRUCTION_VERTICES });
    }
    let h_offset = c.n * params.path_len();
    let q_offset = h_offset + params.sections() * params.h_block();
    let mut out = ConstructionOutput { graph: Graph::empty(total), params, csp: c.clone(), h_offset, q_offset };
    let p = &out.params;
    let (s, [s1, s2]) = (total - 3, [total - 2, total - 1]);
    let mut edges = vec![(s, s1), (s, s2)];

    for i in 0..p.n {
        edges.extend((1..p.path_len()).map(|j| (out.u(i, j - 1), out.u(i, j))));
    }

    for j in 0..p.sections() {
        let con = out.constraint_of(j);
        for (sigma, a) in con.assignments.iter().enumerate() {
            for (slot, (&i, &alpha)) in con.vars.iter().zip(a).enumerate() {
                let alpha = alpha as usize;
                let (beta, gamma) = ((alpha + 2) % 5, (alpha + 3) % 5);
                let (z1, z2) = (out.z(j, sigma, slot, 0), out.z(j, sigma, slot, 1));
                edges.push((out.u(i, 5 * j + alpha), z1));
                edges.push((out.u(i, 5 * j + alpha), z2));
                edges.push((out.u(i, 5 * j + beta), z1));
                edges.push((out.u(i, 5 * j + gamma), z2));
            }
        }
        for s1_ in 0..p.c {
            for s2_ in s1_ + 1..p.c {
                for x in out.z_set(j, s1_) {
                    edges.extend(out.z_set(j, s2_).map(|y| (x, y)));
                }
            }
        }
        for t in 0..p.w_per_section() {
            let w = out.w(j, t);
            edges.extend((0..p.c).flat_map(|sigma| out.z_set(j, sigma)).map(|z| (w, z)));
            for x in out.w_pendants(j, t) {
                edges.push((x, w));
                edges.push((x, s));
            }
        }
    }

    for i in 0..p.n {
        for j in 0..p.sections() {
            for r in 0..p.a {
                for l1 in 0..5 {
                    for l2 in l1 + 1..5 {
                        for t1 in 0..2 {
                            edges.extend((0..2).map(|t2| (out.b(i, j, r, l1, t1), out.b(i, j, r, l2, t2))));
                        }
                    }
                }
                for ell in 0..5 {
                    for t in 0..2 {
                        let b = out.b(i, j, r, ell, t);
                        edges.extend(out.a_set(i, j, r).map(|a| (b, a)));
                        edges.push((b, out.u(i, 5 * j + ell)));
                    }
                    edges.push((out.b(i, j, r, ell, 0), out.u(i, 5 * j + (ell + 2) % 5)));
                    edges.push((out.b(i, j, r, ell, 1), out.u(i, 5 * j + (ell + 3) % 5)));
                }
                for (t, a) in out.a_set(i, j, r).enumerate() {
                    for x in out.a_pendants(i, j, r, t) {
                        edges.push((x, a));
                        edges.push((x, s));
                    }
                }
            }
        }
    }

    out.graph = Graph::from_edges(total, edges)?;
    Ok(out)
}

/// The five-step solution of size at most `k` induced by a satisfying
/// assignment `rho` (one value per variable of the normalized instance).
pub fn build_witness_solution(out: &ConstructionOutput, rho: &[u8]) -> Result<MixedSolution> {
    let p = &out.params;
    if rho.len() != p.n || rho.iter().any(|&v| v > 4) {
        return Err(contract(format!("assignment must give a value in 0..=4 to each of {} variables", p.n)));
    }
    if let Some(j) = out.csp.first_violation(rho) {
        return Err(contract(format!("assignment violates constraint {}", j + 1)));
    }
    let g = &out.graph;
    let mut d = Vec::new();
    let mut pairs = Vec::new();

    for (i, &alpha) in rho.iter().enumerate() {
        let len = p.path_len();
        let mut selected = vec![false; len];
        for j in 0..p.sections() {
            selected[5 * j + alpha as usize] = true;
            d.push(out.u(i, 5 * j + alpha as usize));
        }
        let free = |x: usize| {
            !selected[x] && !(x > 0 && selected[x - 1]) && !(x + 1 < len && selected[x + 1])
        };
        let mut x = 0;
        while x < len {
            if !free(x) {
                x += 1;
            } else if x + 1 < len && free(x + 1) {
                pairs.push((out.u(i, x), out.u(i, x + 1)));
                x += 2;
            } else {
                d.push(out.u(i, x));
                x += 1;
            }
        }
    }

    for j in 0..p.sections() {
        let con = out.constraint_of(j);
        let chosen = con.assignments.iter().position(|a| con.agrees(a, rho)).expect("constraint is satisfied");
        let others = (0..p.c).filter(|&sigma| sigma != chosen).flat_map(|sigma| out.z_set(j, sigma));
        pairs.extend(others.enumerate().map(|(t, z)| (out.w(j, t), z)));
    }

    for (i, &alpha) in rho.iter().enumerate() {
        for j in 0..p.sections() {
            for r in 0..p.a {
                let bs = (0..5)
                    .filter(|&ell| ell != alpha as usize)
                    .flat_map(|ell| [out.b(i, j, r, ell, 0), out.b(i, j, r, ell, 1)]);
                pairs.extend(out.a_set(i, j, r).zip(bs));
            }
        }
    }

    d.push(out.s());
    MixedSolution::from_pairs(g, d, &pairs)
}

/// A path decomposition of the construction and where its pieces sit.
#[derive(Debug, Clone)]
pub struct EmittedPath {
    pub td: TreeDecomposition,
    /// Width before the leaves are re-inserted.
    pub core_width: usize,
    /// Output bag indices of the first and last bag of each section.
    pub section_bounds: Vec<(usize, usize)>,
    pub variables: usize,
}

impl EmittedPath {
    pub fn width(&self) -> usize {
        self.td.width()
    }

    /// Width minus the variable count.
    pub fn excess(&self) -> isize {
        self.width() as isize - self.variables as isize
    }
}

struct Sweep {
    current: BTreeSet<usize>,
    bags: Vec<Vec<usize>>,
    leaves: Vec<Vec<usize>>,
}

impl Sweep {
    fn snapshot(&mut self) -> usize {
        self.bags.push(self.current.iter().copied().collect());
        self.leaves.push(Vec::new());
        self.bags.len() - 1
    }
}

/// Path decomposition that keeps `s` in every bag, sweeps the sections in
/// order with the checker gadget resident throughout its section, brings in
/// each variable's five path vertices and then each consistency copy one at
/// a time, and finally hangs every leaf (after removing `s`) in a copy of a
/// bag holding its neighbor.
pub fn emit_path_decomposition(out: &ConstructionOutput) -> EmittedPath {
    let p = &out.params;
    let s = out.s();
    let mut sw = Sweep { current: BTreeSet::from([s]), bags: Vec::new(), leaves: Vec::new() };
    let mut core_bounds = Vec::with_capacity(p.sections());
    sw.current.extend((0..p.n).map(|i| out.u(i, 0)));
    if p.sections() == 0 {
        sw.snapshot();
    }
    for j in 0..p.sections() {
        let h: Vec<usize> = (out.h_start(j)..out.h_start(j) + p.z_per_section() + p.w_per_section()).collect();
        sw.current.extend(&h);
        let first = sw.snapshot();
        for t in 0..p.w_per_section() {
            sw.leaves[first].extend(out.w_pendants(j, t));
        }
        for i in 0..p.n {
            sw.current.extend((0..5).map(|t| out.u(i, 5 * j + t)));
            sw.snapshot();
            for r in 0..p.a {
                let a = out.a_set(i, j, r);
                let copy: Vec<usize> = a.clone().chain((0..5).flat_map(|l| [out.b(i, j, r, l, 0), out.b(i, j, r, l, 1)])).collect();
                sw.current.extend(&copy);
                let at = sw.snapshot();
                for t in 0..8 {
                    sw.leaves[at].extend(out.a_pendants(i, j, r, t));
                }
                copy.iter().for_each(|v| {
                    sw.current.remove(v);
                });
            }
            for t in 0..4 {
                sw.current.remove(&out.u(i, 5 * j + t));
            }
        }
        let last = sw.snapshot();
        core_bounds.push((first, last));
        h.iter().for_each(|v| {
            sw.current.remove(v);
        });
        if j + 1 < p.sections() {
            for i in 0..p.n {
                sw.current.insert(out.u(i, 5 * (j + 1)));
                sw.snapshot();
                sw.current.remove(&out.u(i, 5 * j + 4));
                sw.snapshot();
            }
        }
    }
    sw.leaves[0].extend(out.s_leaves());

    let core_width = sw.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1);
    let mut bags = Vec::with_capacity(sw.bags.len() + sw.leaves.iter().map(Vec::len).sum::<usize>());
    let mut position = Vec::with_capacity(sw.bags.len());
    for (bag, leaves) in sw.bags.into_iter().zip(sw.leaves) {
        position.push(bags.len());
        let leaf_bags: Vec<Vec<usize>> = leaves
            .iter()
            .map(|&v| {
                let mut with = bag.clone();
                let at = with.binary_search(&v).unwrap_err();
                with.insert(at, v);
                with
            })
            .collect();
        bags.push(bag);
        bags.extend(leaf_bags);
    }
    let tree = (1..bags.len()).map(|b| (b - 1, b)).collect();
    let section_bounds = core_bounds.iter().map(|&(f, l)| (position[f], position[l])).collect();
    EmittedPath { td: TreeDecomposition::new(bags, tree), core_width, section_bounds, variables: p.n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::validate_mds;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(q: usize, vars: Vec<usize>, assignments: Vec<Vec<u8>>, n: usize) -> Csp5Instance {
        Csp5Instance { n, q, constraints: vec![Constraint { vars, assignments }] }
    }

    #[test]
    fn normalization_examples() {
        let c = single(2, vec![0], vec![vec![3]], 1);
        let norm = normalize_csp(&c).unwrap();
        assert_eq!(norm.n, 2);
        let con = &norm.constraints[0];
        assert_eq!(con.vars, vec![0, 1]);
        assert_eq!(con.assignments.len(), 24);
        let distinct: BTreeSet<_> = con.assignments.iter().collect();
        assert_eq!(distinct.len(), 5);
        assert!(con.assignments.iter().all(|a| a[0] == 3));

        assert_eq!(normalize_csp(&norm).unwrap(), norm);
        let empty = Csp5Instance { n: 3, q: 2, constraints: vec![] };
        assert_eq!(normalize_csp(&empty).unwrap(), empty);

        let full = single(1, vec![0], (0..5).map(|v| vec![v]).collect(), 1);
        assert!(normalize_csp(&full).unwrap().constraints.is_empty());
        assert!(normalize_csp(&single(1, vec![0], vec![], 1)).is_err());
        assert!(normalize_csp(&single(1, vec![0], vec![vec![7]], 1)).is_err());
    }

    #[test]
    fn parameters_for_the_smallest_instance() {
        let p = SethParams::new(1, 1, 1, None);
        assert_eq!((p.f, p.c, p.k, p.path_len()), (15, 4, 1562, 75));
        assert_eq!(p.pendant_size, 2 * 1562 + 1);
        assert!(p.is_faithful());
    }

    fn tiny() -> (Csp5Instance, Vec<u8>) {
        let c = normalize_csp(&single(1, vec![0], vec![vec![2], vec![4]], 1)).unwrap();
        (c, vec![2])
    }

    #[test]
    fn construction_counts_and_wiring() {
        let (c, _) = tiny();
        let out = build_seth_instance(&c, Some(1)).unwrap();
        let p = &out.params;
        assert_eq!(out.graph.n(), p.vertex_count());
        assert_eq!(p.z_per_section(), p.c * 2 * p.q);
        assert_eq!(p.w_per_section(), 2 * p.q * (p.c - 1));
        let s = out.s();
        for j in 0..p.sections() {
            for t in 0..p.w_per_section() {
                let pend: Vec<usize> = out.w_pendants(j, t).collect();
                assert_eq!(pend.len(), 1);
                assert_eq!(out.graph.neighbors(pend[0]), &[out.w(j, t), s][..]);
            }
            let con = &out.csp.constraints[j % p.m];
            for (sigma, a) in con.assignments.iter().enumerate() {
                let alpha = a[0] as usize;
                let z1: Vec<usize> = out.graph.neighbors(out.z(j, sigma, 0, 0)).iter().copied().filter(|&x| x < out.h_start(0)).collect();
                let z2: Vec<usize> = out.graph.neighbors(out.z(j, sigma, 0, 1)).iter().copied().filter(|&x| x < out.h_start(0)).collect();
                let mut e1 = vec![out.u(0, 5 * j + alpha), out.u(0, 5 * j + (alpha + 2) % 5)];
                let mut e2 = vec![out.u(0, 5 * j + alpha), out.u(0, 5 * j + (alpha + 3) % 5)];
                e1.sort_unstable();
                e2.sort_unstable();
                assert_eq!((z1, z2), (e1, e2));
            }
        }
        assert!(build_seth_instance(&single(1, vec![0], vec![vec![1]], 1), Some(1)).is_err());
    }

    #[test]
    fn witness_is_valid_and_within_budget() {
        let (c, rho) = tiny();
        let out = build_seth_instance(&c, Some(1)).unwrap();
        let sol = build_witness_solution(&out, &rho).unwrap();
        assert!(validate_mds(&out.graph, &sol).unwrap().valid);
        assert!(sol.size() <= out.k());
        assert!(matches!(build_witness_solution(&out, &[0]), Err(Error::Contract(_))));
    }

    #[test]
    fn path_cost_per_value() {
        let (c, _) = tiny();
        let out = build_seth_instance(&c, Some(1)).unwrap();
        let fm = out.params.sections();
        let c_all = normalize_csp(&single(1, vec![0], (0..4).map(|v| vec![v]).collect(), 1)).unwrap();
        let out_all = build_seth_instance(&c_all, Some(1)).unwrap();
        for (value, expected) in [(0u8, fm + 1), (1, fm), (2, (fm - 1) + 2), (3, fm)] {
            let sol = build_witness_solution(&out_all, &[value]).unwrap();
            let main = out_all.params.path_len();
            let d_main = sol.vertices().iter().filter(|&&v| v < main).count() - fm;
            let m_main = sol.edge_pairs(&out_all.graph).iter().filter(|&&(a, b)| a < main && b < main).count();
            assert_eq!(d_main + m_main, expected, "value {value}");
        }
        let _ = out;
    }

    #[test]
    fn path_decomposition_is_valid() {
        let (c, _) = tiny();
        let out = build_seth_instance(&c, Some(1)).unwrap();
        let emitted = emit_path_decomposition(&out);
        emitted.td.validate(&out.graph).unwrap();
        assert_eq!(emitted.width(), emitted.core_width + 1);
        for (j, &(first, last)) in emitted.section_bounds.iter().enumerate() {
            assert!(emitted.td.bags[first].contains(&out.u(0, 5 * j)));
            assert!(emitted.td.bags[last].contains(&out.u(0, 5 * j + 4)));
        }
    }

    #[test]
    fn random_instances_are_planted() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (c, rho) = random_satisfiable_csp(2, 2, 2, &mut rng).unwrap();
            assert!(c.is_normalized());
            assert_eq!(c.first_violation(&rho), None);
        }
    }
}
