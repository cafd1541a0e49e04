//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenKind {
    /// Each of the `n(n-1)/2` pairs is an edge independently with probability `p`.
    Random { n: usize, p: f64, seed: u64 },
    Path(usize),
    Cycle(usize),
    /// Vertex `v > 0` attaches to a uniform earlier vertex.
    Tree { n: usize, seed: u64 },
}

pub fn gen_instance(kind: GenKind) -> Result<Graph> {
    let n = match kind {
        GenKind::Random { n, .. } | GenKind::Path(n) | GenKind::Cycle(n) | GenKind::Tree { n, .. } => n,
    };
    if n == 0 {
        return Err(Error::Input("generators need at least one vertex".into()));
    }
    match kind {
        GenKind::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Input(format!("edge probability {p} is outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        GenKind::Path(n) => Ok(Graph::path(n)),
        GenKind::Cycle(n) => Graph::cycle(n),
        GenKind::Tree { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Graph::from_edges(n, (1..n).map(|v| (rng.random_range(0..v), v)).collect::<Vec<_>>())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(gen_instance(GenKind::Path(4)).unwrap(), Graph::path(4));
        let mut k3: Vec<_> = gen_instance(GenKind::Cycle(3)).unwrap().edges().to_vec();
        k3.sort_unstable();
        assert_eq!(k3, Graph::complete(3).edges());
        assert_eq!(gen_instance(GenKind::Random { n: 10, p: 0.0, seed: 3 }).unwrap().m(), 0);
        assert_eq!(gen_instance(GenKind::Random { n: 6, p: 1.0, seed: 3 }).unwrap().m(), 15);
        assert!(matches!(gen_instance(GenKind::Path(0)), Err(Error::Input(_))));
        assert!(gen_instance(GenKind::Random { n: 3, p: 1.5, seed: 0 }).is_err());
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        let a = gen_instance(GenKind::Random { n: 12, p: 0.3, seed: 7 }).unwrap();
        let b = gen_instance(GenKind::Random { n: 12, p: 0.3, seed: 7 }).unwrap();
        assert_eq!(a, b);
        let t = gen_instance(GenKind::Tree { n: 30, seed: 1 }).unwrap();
        assert_eq!(t.m(), 29);
        assert_eq!(t, gen_instance(GenKind::Tree { n: 30, seed: 1 }).unwrap());
    }
}
