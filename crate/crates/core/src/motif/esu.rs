//! Exhaustive (ESU) and sampled (RAND-ESU) enumeration of connected induced
//! k-vertex subgraphs.

use std::collections::HashMap;

use arrayvec::ArrayVec;
use rand::Rng;

use super::catalog::{catalog, MotifCatalog};
use super::small::{SmallGraph, MAX_ORDER};
use super::{MotifInstance, MotifPattern};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Decides whether an ESU tree node is expanded.
pub trait ExtensionFilter {
    /// `size` is the subgraph size the extension would reach (1 for roots).
    fn keep(&mut self, size: usize) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Exhaustive;

impl ExtensionFilter for Exhaustive {
    #[inline]
    fn keep(&mut self, _size: usize) -> bool {
        true
    }
}

/// Keeps an extension to size `d` with probability `probabilities[d - 1]`.
#[derive(Clone, Debug)]
pub struct DepthSampler<R> {
    probabilities: Vec<f64>,
    rng: R,
}

impl<R: Rng> ExtensionFilter for DepthSampler<R> {
    #[inline]
    fn keep(&mut self, size: usize) -> bool {
        let p = self.probabilities[size - 1];
        p >= 1.0 || self.rng.gen_bool(p)
    }
}

struct Frame {
    ext: VertexSet,
    closed: VertexSet,
}

/// Streaming ESU traversal. Roots are visited in ascending vertex id and each
/// extension set is consumed from its smallest vertex.
pub struct Esu<'g, F> {
    graph: &'g Graph,
    k: usize,
    filter: F,
    next_root: usize,
    above_root: VertexSet,
    sub: ArrayVec<usize, MAX_ORDER>,
    frames: Vec<Frame>,
    classifier: Classifier,
}

/// Maps induced adjacency strings to catalog patterns, memoising each string.
struct Classifier {
    catalog: &'static MotifCatalog,
    memo: HashMap<u32, MotifPattern>,
}

impl Classifier {
    fn classify(&mut self, graph: &Graph, vertices: &[usize]) -> MotifPattern {
        let k = vertices.len();
        let mut bits = 0u32;
        for j in 1..k {
            for i in 0..j {
                bits = (bits << 1) | graph.has_edge(vertices[i], vertices[j]) as u32;
            }
        }
        let catalog = self.catalog;
        *self.memo.entry(bits).or_insert_with(|| {
            let code = super::small::canonical_code(&SmallGraph::from_bits(k, bits));
            catalog
                .lookup(code)
                .expect("ESU emits connected subgraphs only")
        })
    }
}

impl<'g, F: ExtensionFilter> Esu<'g, F> {
    fn new(graph: &'g Graph, k: usize, filter: F) -> Result<Self> {
        let catalog = catalog(k)?;
        Ok(Esu {
            graph,
            k,
            filter,
            next_root: 0,
            above_root: VertexSet::default(),
            sub: ArrayVec::new(),
            frames: Vec::with_capacity(k),
            classifier: Classifier {
                catalog,
                memo: HashMap::new(),
            },
        })
    }

    fn emit(&mut self, last: usize) -> MotifInstance {
        let mut vertices: ArrayVec<usize, MAX_ORDER> = self.sub.clone();
        vertices.push(last);
        vertices.sort_unstable();
        let pattern = self.classifier.classify(self.graph, &vertices);
        MotifInstance { vertices, pattern }
    }
}

impl<F: ExtensionFilter> Iterator for Esu<'_, F> {
    type Item = MotifInstance;

    fn next(&mut self) -> Option<MotifInstance> {
        let n = self.graph.vertex_count();
        loop {
            let Some(top) = self.frames.last_mut() else {
                if self.next_root >= n {
                    return None;
                }
                let v = self.next_root;
                self.next_root += 1;
                if !self.filter.keep(1) {
                    continue;
                }
                self.above_root = VertexSet::above(n, v);
                let mut ext = VertexSet::with_capacity(n);
                ext.union_masked(
                    self.graph.adjacency(v),
                    &VertexSet::with_capacity(n),
                    &self.above_root,
                );
                let mut closed = self.graph.adjacency(v).clone();
                closed.insert(v);
                self.sub.clear();
                self.sub.push(v);
                self.frames.push(Frame { ext, closed });
                continue;
            };
            let Some(w) = top.ext.pop_first() else {
                self.frames.pop();
                self.sub.pop();
                continue;
            };
            let size = self.sub.len() + 1;
            if !self.filter.keep(size) {
                continue;
            }
            if size == self.k {
                return Some(self.emit(w));
            }
            let nbrs = self.graph.adjacency(w);
            let mut ext = top.ext.clone();
            ext.union_masked(nbrs, &top.closed, &self.above_root);
            let mut closed = top.closed.clone();
            closed.union_with(nbrs);
            closed.insert(w);
            self.sub.push(w);
            self.frames.push(Frame { ext, closed });
        }
    }
}

/// Every connected induced `k`-vertex subgraph of `graph`, each exactly once.
pub fn esu_enumerate(graph: &Graph, k: usize) -> Result<Esu<'_, Exhaustive>> {
    Esu::new(graph, k, Exhaustive)
}

/// RAND-ESU: the ESU traversal where each extension reaching size `d` is kept
/// independently with probability `probabilities[d - 1]`.
pub fn rand_esu<'g, R: Rng>(
    graph: &'g Graph,
    k: usize,
    probabilities: &[f64],
    rng: R,
) -> Result<Esu<'g, DepthSampler<R>>> {
    if probabilities.len() != k {
        return Err(Error::param(format!(
            "expected {k} depth probabilities, got {}",
            probabilities.len()
        )));
    }
    if let Some(p) = probabilities.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::param(format!(
            "depth probability {p} outside (0, 1]"
        )));
    }
    Esu::new(
        graph,
        k,
        DepthSampler {
            probabilities: probabilities.to_vec(),
            rng,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vertex_sets(g: &Graph, k: usize) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = esu_enumerate(g, k)
            .unwrap()
            .map(|m| m.vertices.to_vec())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn complete_five() {
        let inst: Vec<_> = esu_enumerate(&Graph::complete(5), 5).unwrap().collect();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].pattern.edge_count(), 10);
    }

    #[test]
    fn path_six() {
        // brute force: of the C(6,5) = 6 subsets only {0..4} and {1..5} are connected
        assert_eq!(
            vertex_sets(&Graph::path(6), 5),
            vec![vec![0, 1, 2, 3, 4], vec![1, 2, 3, 4, 5]]
        );
        let pats: Vec<_> = esu_enumerate(&Graph::path(6), 5)
            .unwrap()
            .map(|m| m.pattern)
            .collect();
        assert_eq!(pats[0], pats[1]);
        assert_eq!(pats[0].edge_count(), 4);
    }

    #[test]
    fn five_cycle() {
        let inst: Vec<_> = esu_enumerate(&Graph::cycle(5), 5).unwrap().collect();
        assert_eq!(inst.len(), 1);
        let g = inst[0].pattern.graph();
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn empty_and_small_graphs() {
        assert_eq!(esu_enumerate(&Graph::new(10), 5).unwrap().count(), 0);
        assert_eq!(esu_enumerate(&Graph::complete(4), 5).unwrap().count(), 0);
        assert_eq!(esu_enumerate(&Graph::new(0), 3).unwrap().count(), 0);
        assert!(esu_enumerate(&Graph::path(4), 2).is_err());
    }

    #[test]
    fn unit_probabilities_match_exhaustive() {
        let g = Graph::from_edges(
            9,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (2, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (1, 7),
            ],
        );
        let a: Vec<_> = esu_enumerate(&g, 4).unwrap().collect();
        let b: Vec<_> = rand_esu(&g, 4, &[1.0; 4], ChaCha8Rng::seed_from_u64(1))
            .unwrap()
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn probabilities_validated() {
        let g = Graph::path(6);
        let rng = || ChaCha8Rng::seed_from_u64(0);
        assert!(rand_esu(&g, 5, &[1.0, 1.0, 0.0, 1.0, 1.0], rng()).is_err());
        assert!(rand_esu(&g, 5, &[1.0, 1.0, 1.5, 1.0, 1.0], rng()).is_err());
        assert!(rand_esu(&g, 5, &[1.0; 4], rng()).is_err());
    }

    #[test]
    fn sampled_mean_on_path() {
        // exhaustive count is 2; halving the last level gives an expected 1
        let g = Graph::path(6);
        let runs = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let total: usize = (0..runs)
            .map(|_| {
                let r = ChaCha8Rng::seed_from_u64(rng.gen());
                rand_esu(&g, 5, &[1.0, 1.0, 1.0, 1.0, 0.5], r)
                    .unwrap()
                    .count()
            })
            .sum();
        let mean = total as f64 / runs as f64;
        // count ~ Binomial(2, 0.5): sd 0.7071, standard error 0.00707
        let sigma = (0.5f64 / runs as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sigma, "mean {mean}");
    }
}
