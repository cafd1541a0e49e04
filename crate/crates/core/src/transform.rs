use crate::graph::Graph;
use crate::solution::MixedSolution;

/// What a vertex of the incidence graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Incidence {
    Vertex(usize),
    Edge(usize),
}

/// The graph with every edge subdivided once. Vertex `v < n` keeps its id;
/// edge `e` becomes vertex `n + e`.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    pub graph: Graph,
    pub origin: Vec<Incidence>,
    original_n: usize,
}

impl IncidenceGraph {
    pub fn vertex_of_edge(&self, e: usize) -> usize {
        self.original_n + e
    }

    /// Reads a vertex set of the incidence graph as `(D, M)`.
    pub fn to_solution(&self, set: &[usize]) -> MixedSolution {
        let mut d = Vec::new();
        let mut m = Vec::new();
        for &x in set {
            match self.origin[x] {
                Incidence::Vertex(v) => d.push(v),
                Incidence::Edge(e) => m.push(e),
            }
        }
        MixedSolution::new(d, m)
    }

    pub fn from_solution(&self, sol: &MixedSolution) -> Vec<usize> {
        sol.vertices()
            .iter()
            .copied()
            .chain(sol.edges().iter().map(|&e| self.vertex_of_edge(e)))
            .collect()
    }
}

pub fn incidence_graph(g: &Graph) -> IncidenceGraph {
    let n = g.n();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, &(u, v))| [(u, n + e), (v, n + e)]);
    let graph = Graph::from_edges(n + g.m(), edges).expect("subdivision is simple");
    let origin = (0..n)
        .map(Incidence::Vertex)
        .chain((0..g.m()).map(Incidence::Edge))
        .collect();
    IncidenceGraph { graph, origin, original_n: n }
}

/// Edge dominating set to mixed dominating set: a new apex `n` adjacent to
/// every vertex, carrying `n + 2` pendant leaves `n+1 ..= 2n+2`.
pub fn reduce_eds_to_mds(g: &Graph) -> Graph {
    let n = g.n();
    let apex = n;
    let leaves = n + 2;
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain((0..n).map(|v| (v, apex)))
        .chain((0..leaves).map(|i| (apex, apex + 1 + i)));
    Graph::from_edges(n + 1 + leaves, edges).expect("reduction output is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_path_shaped(g: &Graph) -> bool {
        let ends = (0..g.n()).filter(|&v| g.degree(v) == 1).count();
        g.m() + 1 == g.n() && ends == 2 && (0..g.n()).all(|v| g.degree(v) <= 2)
    }

    #[test]
    fn subdivisions() {
        let i2 = incidence_graph(&Graph::path(2));
        assert!(is_path_shaped(&i2.graph) && i2.graph.n() == 3);
        let i3 = incidence_graph(&Graph::path(3));
        assert!(is_path_shaped(&i3.graph) && i3.graph.n() == 5);
        let tri = incidence_graph(&Graph::complete(3));
        assert_eq!(tri.graph.n(), 6);
        assert_eq!(tri.graph.m(), 6);
        assert!((0..6).all(|v| tri.graph.degree(v) == 2));
        assert_eq!(tri.origin[4], Incidence::Edge(1));
    }

    #[test]
    fn solution_mapping_round_trips() {
        let g = Graph::complete(4);
        let inc = incidence_graph(&g);
        let sol = MixedSolution::new(vec![0, 3], vec![1, 5]);
        assert_eq!(inc.to_solution(&inc.from_solution(&sol)), sol);
    }

    #[test]
    fn eds_reduction_shape() {
        let g = Graph::path(3);
        let r = reduce_eds_to_mds(&g);
        assert_eq!(r.n(), 3 + 1 + 5);
        assert_eq!(r.degree(3), 3 + 5);
        assert_eq!(r.m(), 2 + 3 + 5);
    }
}
