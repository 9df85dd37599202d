//! Simple undirected graph over dense vertex ids `0..n`.

use crate::bitset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::with_capacity(n); n],
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list; self-loops and repeated pairs are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds `{u, v}`. Returns false for self-loops and already present edges.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(
            u < self.vertex_count() && v < self.vertex_count(),
            "vertex out of range"
        );
        if u == v || self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.neighbors[a];
            let pos = list.binary_search(&b).unwrap_err();
            list.insert(pos, b);
        }
        self.edge_count += 1;
        true
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Neighbours of `v` in ascending order.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub(crate) fn adjacency(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Edges of the subgraph induced by `vertices`, each as `(u, v)` with `u < v`.
    pub fn induced_edges(&self, vertices: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if self.has_edge(a, b) {
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
        out
    }

    pub fn is_connected_subset(&self, vertices: &[usize]) -> bool {
        let Some(&first) = vertices.first() else {
            return true;
        };
        let mut seen = vec![false; vertices.len()];
        seen[0] = true;
        let mut stack = vec![first];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for (i, &w) in vertices.iter().enumerate() {
                if !seen[i] && self.has_edge(u, w) {
                    seen[i] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == vertices.len()
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    /// Disjoint union; vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let off = self.vertex_count();
        let mut g = Graph::new(off + other.vertex_count());
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }
}
