/// Fixed-capacity vertex set backed by 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / 64, 1u64 << (v % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1u64 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self |= a & !b & c`, the ESU exclusive-neighbourhood update.
    pub fn union_masked(&mut self, a: &VertexSet, not_b: &VertexSet, c: &VertexSet) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w |= a.words[i] & !not_b.words[i] & c.words[i];
        }
    }

    /// Removes and returns the smallest element.
    pub fn pop_first(&mut self) -> Option<usize> {
        for (i, w) in self.words.iter_mut().enumerate() {
            if *w != 0 {
                let b = w.trailing_zeros() as usize;
                *w &= *w - 1;
                return Some(i * 64 + b);
            }
        }
        None
    }

    /// Set of all vertices strictly greater than `v` below capacity `n`.
    pub fn above(n: usize, v: usize) -> Self {
        let mut s = VertexSet::with_capacity(n);
        for u in v + 1..n {
            s.insert(u);
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::with_capacity(130);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(s.pop_first(), Some(3));
        assert!(s.contains(64));
        assert!(s.contains(129));
        assert!(!s.contains(1000));
        let above = VertexSet::above(130, 127);
        assert_eq!(above.iter().collect::<Vec<_>>(), vec![128, 129]);
    }
}
