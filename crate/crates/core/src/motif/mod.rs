//! Small-graph classification and motif instance enumeration.

mod catalog;
mod esu;
mod small;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

pub use catalog::{build_catalog, catalog, CatalogEntry, MotifCatalog};
pub use esu::{esu_enumerate, rand_esu, DepthSampler, Esu, Exhaustive, ExtensionFilter};
pub use small::{canonical_code, SmallGraph, MAX_ORDER};

/// A connected isomorphism class, identified by its canonical code.
///
/// Ordering follows `catalog_index`, i.e. `(edge_count, code)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotifPattern {
    code: u32,
    k: u8,
    edge_count: u8,
    catalog_index: u16,
}

impl MotifPattern {
    pub(crate) fn new(k: usize, code: u32, catalog_index: usize) -> Self {
        MotifPattern {
            code,
            k: k as u8,
            edge_count: code.count_ones() as u8,
            catalog_index: catalog_index as u16,
        }
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count as usize
    }

    pub fn catalog_index(&self) -> usize {
        self.catalog_index as usize
    }

    /// The canonical representative.
    pub fn graph(&self) -> SmallGraph {
        SmallGraph::from_bits(self.k(), self.code)
    }

    pub fn has_triangle(&self) -> bool {
        self.graph().triangle_count() > 0
    }
}

impl Ord for MotifPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k, self.edge_count, self.code).cmp(&(other.k, other.edge_count, other.code))
    }
}

impl PartialOrd for MotifPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One occurrence of a pattern: a sorted vertex set whose induced subgraph
/// belongs to `pattern`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MotifInstance {
    pub vertices: ArrayVec<usize, MAX_ORDER>,
    pub pattern: MotifPattern,
}

impl MotifInstance {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    /// Induced edges of the instance in `graph`.
    pub fn edges(&self, graph: &Graph) -> Vec<(usize, usize)> {
        graph.induced_edges(&self.vertices)
    }

    pub fn degree_sum(&self, graph: &Graph) -> usize {
        self.vertices.iter().map(|&v| graph.degree(v)).sum()
    }
}

/// ESU output grouped by pattern, in catalog order. Instances keep ESU order.
pub fn instances_by_pattern(
    graph: &Graph,
    k: usize,
) -> Result<BTreeMap<MotifPattern, Vec<MotifInstance>>> {
    let mut map: BTreeMap<MotifPattern, Vec<MotifInstance>> = BTreeMap::new();
    for inst in esu_enumerate(graph, k)? {
        map.entry(inst.pattern).or_default().push(inst);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_six() {
        let map = instances_by_pattern(&Graph::complete(6), 5).unwrap();
        assert_eq!(map.len(), 1);
        let (p, inst) = map.iter().next().unwrap();
        assert_eq!(p.edge_count(), 10);
        assert_eq!(inst.len(), 6);
    }

    #[test]
    fn edgeless() {
        assert!(instances_by_pattern(&Graph::new(12), 5).unwrap().is_empty());
    }

    #[test]
    fn path_eight() {
        // brute force over C(8,5) = 56 subsets: only the 4 runs of consecutive vertices are connected
        let map = instances_by_pattern(&Graph::path(8), 5).unwrap();
        assert_eq!(map.len(), 1);
        let inst = map.values().next().unwrap();
        let sets: Vec<Vec<usize>> = inst.iter().map(|m| m.vertices.to_vec()).collect();
        assert_eq!(sets.len(), 4);
        for s in 0..4 {
            assert!(sets.contains(&(s..s + 5).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn pattern_order_matches_catalog() {
        let cat = catalog(5).unwrap();
        let pats = cat.patterns();
        for w in pats.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(pats.iter().filter(|p| p.has_triangle()).count() > 10);
    }
}
