use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

/// Undirected historical-interaction network over user ids.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SocialNetwork {
    adj: HashMap<String, BTreeSet<String>>,
    edge_count: usize,
}

impl SocialNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `{u, v}`; returns false for self-loops and duplicates.
    pub fn add_edge(&mut self, u: &str, v: &str) -> bool {
        if u == v {
            return false;
        }
        if !self
            .adj
            .entry(u.to_owned())
            .or_default()
            .insert(v.to_owned())
        {
            return false;
        }
        self.adj
            .entry(v.to_owned())
            .or_default()
            .insert(u.to_owned());
        self.edge_count += 1;
        true
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        self.adj.get(u).is_some_and(|ns| ns.contains(v))
    }

    pub fn neighbors(&self, u: &str) -> impl Iterator<Item = &str> + '_ {
        self.adj.get(u).into_iter().flatten().map(String::as_str)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .flat_map(|(u, ns)| {
                ns.iter()
                    .filter(move |v| u.as_str() < v.as_str())
                    .map(move |v| (u.as_str(), v.as_str()))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Reads whitespace-separated `u v` lines. Blank lines and `#` comments are
    /// ignored; lines without exactly two tokens are skipped and counted.
    pub fn from_reader(reader: impl BufRead) -> std::io::Result<(Self, usize)> {
        let mut net = SocialNetwork::new();
        let mut malformed = 0;
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => {
                    net.add_edge(u, v);
                }
                _ => malformed += 1,
            }
        }
        Ok((net, malformed))
    }
}

/// Deduplicated undirected edge set with self-loops removed.
pub fn build_social_network<S: AsRef<str>>(
    edge_lines: impl IntoIterator<Item = (S, S)>,
) -> SocialNetwork {
    let mut net = SocialNetwork::new();
    for (u, v) in edge_lines {
        net.add_edge(u.as_ref(), v.as_ref());
    }
    net
}
