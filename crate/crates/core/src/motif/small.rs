//! Graphs on at most eight vertices packed into an adjacency bit string.
//!
//! Vertex pairs are ordered `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...`
//! (pair `(i, j)` with `i < j` has position `j(j-1)/2 + i`) and the first
//! pair is the most significant bit. With this order the bits contributed by
//! vertex `j` directly follow those of vertices `0..j`, which lets the
//! canonical-code search prune on prefixes.

use serde::{Deserialize, Serialize};

pub const MAX_ORDER: usize = 8;

#[inline]
pub(crate) const fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

#[inline]
const fn pair_pos(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmallGraph {
    order: u8,
    bits: u32,
}

impl SmallGraph {
    pub fn empty(order: usize) -> Self {
        assert!(
            order <= MAX_ORDER,
            "small graphs hold at most {MAX_ORDER} vertices"
        );
        SmallGraph {
            order: order as u8,
            bits: 0,
        }
    }

    /// Interprets `bits` as an adjacency string for `order` vertices.
    pub fn from_bits(order: usize, bits: u32) -> Self {
        let g = SmallGraph::empty(order);
        let p = pair_count(order);
        assert!(bits >> p == 0, "bits beyond the pair count");
        SmallGraph { bits, ..g }
    }

    pub fn from_edges(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = SmallGraph::empty(order);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(order: usize) -> Self {
        let p = pair_count(order);
        SmallGraph::from_bits(order, ((1u64 << p) - 1) as u32)
    }

    #[inline]
    fn mask(&self, i: usize, j: usize) -> u32 {
        let (i, j) = (i.min(j), i.max(j));
        1 << (pair_count(self.order()) - 1 - pair_pos(i, j))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.order() && v < self.order());
        self.bits |= self.mask(u, v);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.bits & self.mask(u, v) != 0
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.order();
        (1..k)
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.order()).filter(|&u| self.has_edge(u, v)).count()
    }

    pub fn is_connected(&self) -> bool {
        let k = self.order();
        if k <= 1 {
            return true;
        }
        let mut seen = 1u32;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for w in 0..k {
                if seen & (1 << w) == 0 && self.has_edge(u, w) {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen.count_ones() as usize == k
    }

    pub fn triangle_count(&self) -> usize {
        let k = self.order();
        let mut n = 0;
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if self.has_edge(a, b) && self.has_edge(b, c) && self.has_edge(a, c) {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order());
        SmallGraph::from_edges(
            self.order(),
            self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])),
        )
    }
}

/// Smallest adjacency string over all vertex relabelings of `g`.
///
/// Vertices are placed into canonical positions one at a time; a partial
/// placement fixes a prefix of the string, and branches whose prefix already
/// exceeds the best complete string are cut. The result equals the brute-force
/// minimum over all `k!` permutations.
pub fn canonical_code(g: &SmallGraph) -> u32 {
    let k = g.order();
    if k <= 1 {
        return 0;
    }
    let mut search = CanonSearch {
        g,
        total: pair_count(k),
        placed: [0; MAX_ORDER],
        best: None,
    };
    search.descend(0, 0, 0);
    search.best.expect("at least one complete placement")
}

struct CanonSearch<'a> {
    g: &'a SmallGraph,
    total: usize,
    placed: [usize; MAX_ORDER],
    best: Option<u32>,
}

impl CanonSearch<'_> {
    fn descend(&mut self, depth: usize, used: u32, prefix: u32) {
        let k = self.g.order();
        if depth == k {
            if self.best.is_none_or(|b| prefix < b) {
                self.best = Some(prefix);
            }
            return;
        }
        let prefix_len = pair_count(depth + 1);
        for v in 0..k {
            if used & (1 << v) != 0 {
                continue;
            }
            let mut next = prefix;
            for &u in &self.placed[..depth] {
                next = (next << 1) | self.g.has_edge(u, v) as u32;
            }
            if let Some(best) = self.best {
                if next > best >> (self.total - prefix_len) {
                    continue;
                }
            }
            self.placed[depth] = v;
            self.descend(depth + 1, used | (1 << v), next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};

    fn brute_force(g: &SmallGraph) -> u32 {
        (0..g.order())
            .permutations(g.order())
            .map(|p| g.relabeled(&p).bits())
            .min()
            .unwrap()
    }

    #[test]
    fn bit_layout() {
        let g = SmallGraph::from_edges(3, [(0, 1)]);
        assert_eq!(g.bits(), 0b100);
        let g = SmallGraph::from_edges(3, [(1, 2)]);
        assert_eq!(g.bits(), 0b001);
        assert_eq!(SmallGraph::complete(5).bits(), 1023);
    }

    #[test]
    fn relabeled_paths_agree() {
        let abc = SmallGraph::from_edges(3, [(0, 1), (1, 2)]);
        let bac = SmallGraph::from_edges(3, [(1, 0), (0, 2)]);
        assert_eq!(canonical_code(&abc), canonical_code(&bac));
        let tri = SmallGraph::complete(3);
        assert_ne!(canonical_code(&tri), canonical_code(&abc));
    }

    #[test]
    fn complete_is_all_ones() {
        for k in 2..=8 {
            let g = SmallGraph::complete(k);
            assert_eq!(canonical_code(&g), g.bits());
        }
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let k = rng.gen_range(2..=7);
            let bits = rng.gen::<u32>() & (((1u64 << pair_count(k)) - 1) as u32);
            let g = SmallGraph::from_bits(k, bits);
            assert_eq!(canonical_code(&g), brute_force(&g), "{g:?}");
        }
    }

    #[test]
    fn structure_queries() {
        let bull = SmallGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)]);
        assert_eq!(bull.triangle_count(), 1);
        assert!(bull.is_connected());
        assert_eq!(bull.degree(1), 3);
        assert!(!SmallGraph::from_edges(4, [(0, 1), (2, 3)]).is_connected());
    }
}
