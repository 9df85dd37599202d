use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::small::{canonical_code, SmallGraph, MAX_ORDER};
use super::MotifPattern;
use crate::error::{Error, Result};

/// All connected isomorphism classes on `k` vertices, ordered by
/// `(edge_count, code)`; a pattern's position is its `catalog_index`.
#[derive(Debug)]
pub struct MotifCatalog {
    k: usize,
    patterns: Vec<MotifPattern>,
    by_code: HashMap<u32, usize>,
}

/// One exported catalog row; `edge_list` is the canonical representative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub catalog_index: usize,
    pub k: usize,
    pub edge_count: usize,
    pub code: u32,
    pub edge_list: Vec<[usize; 2]>,
}

impl MotifCatalog {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn patterns(&self) -> &[MotifPattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, catalog_index: usize) -> Option<MotifPattern> {
        self.patterns.get(catalog_index).copied()
    }

    /// Pattern with canonical code `code`, if it is a connected class.
    pub fn lookup(&self, code: u32) -> Option<MotifPattern> {
        self.by_code.get(&code).map(|&i| self.patterns[i])
    }

    pub fn entries(&self) -> Vec<CatalogEntry> {
        self.patterns
            .iter()
            .map(|p| CatalogEntry {
                catalog_index: p.catalog_index(),
                k: p.k(),
                edge_count: p.edge_count(),
                code: p.code(),
                edge_list: p.graph().edges().into_iter().map(|(u, v)| [u, v]).collect(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries()).expect("catalog entries serialize")
    }
}

/// Shared catalog for `3 <= k <= 8`, built on first use.
pub fn catalog(k: usize) -> Result<&'static MotifCatalog> {
    if !(3..=MAX_ORDER).contains(&k) {
        return Err(Error::param(format!("motif size {k} outside 3..=8")));
    }
    Ok(catalog_any(k))
}

/// Patterns of the catalog for `k`, in catalog order.
pub fn build_catalog(k: usize) -> Result<Vec<MotifPattern>> {
    Ok(catalog(k)?.patterns.clone())
}

fn catalog_any(k: usize) -> &'static MotifCatalog {
    static CATALOGS: [OnceLock<MotifCatalog>; MAX_ORDER + 1] =
        [const { OnceLock::new() }; MAX_ORDER + 1];
    CATALOGS[k].get_or_init(|| {
        let codes = connected_codes(k);
        let mut keyed: Vec<(usize, u32)> = codes
            .into_iter()
            .map(|c| (c.count_ones() as usize, c))
            .collect();
        keyed.sort_unstable();
        let patterns: Vec<MotifPattern> = keyed
            .iter()
            .enumerate()
            .map(|(i, &(_, code))| MotifPattern::new(k, code, i))
            .collect();
        let by_code = patterns
            .iter()
            .map(|p| (p.code(), p.catalog_index()))
            .collect();
        MotifCatalog {
            k,
            patterns,
            by_code,
        }
    })
}

// Every connected graph on k vertices has a non-cut vertex, so attaching a
// new vertex to a non-empty neighbour set of each connected (k-1)-class
// reaches every connected k-class.
fn connected_codes(k: usize) -> BTreeSet<u32> {
    if k <= 1 {
        return BTreeSet::from([0]);
    }
    let smaller: Vec<u32> = if k == 2 {
        vec![0]
    } else {
        catalog_any(k - 1)
            .patterns
            .iter()
            .map(|p| p.code())
            .collect()
    };
    let mut out = BTreeSet::new();
    for code in smaller {
        let base = SmallGraph::from_bits(k - 1, code);
        for subset in 1u32..(1 << (k - 1)) {
            let mut g = SmallGraph::from_edges(k, base.edges());
            for u in 0..k - 1 {
                if subset & (1 << u) != 0 {
                    g.add_edge(u, k - 1);
                }
            }
            out.insert(canonical_code(&g));
        }
    }
    out
}
