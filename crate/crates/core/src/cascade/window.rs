use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Cascade, SocialNetwork};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A block of exactly `W` consecutively activated users.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub index: usize,
    /// Members in activation order.
    pub nodes: Vec<String>,
    pub start_time: f64,
    pub end_time: f64,
}

impl Window {
    pub fn contains_time(&self, t: f64) -> bool {
        self.start_time <= t && t <= self.end_time
    }
}

/// Partitions the activation order (root first) into consecutive windows of
/// `window_size` users. A trailing partial block is discarded.
pub fn segment(cascade: &Cascade, window_size: usize) -> Result<Vec<Window>> {
    if window_size == 0 {
        return Err(Error::param("window size must be positive"));
    }
    let activations = cascade.activation_count();
    if activations < window_size {
        return Err(Error::TooSmallCascade {
            activations,
            window_size,
        });
    }
    let order: Vec<(&str, f64)> = cascade.activations().collect();
    Ok(order
        .chunks_exact(window_size)
        .enumerate()
        .map(|(index, block)| Window {
            index,
            nodes: block.iter().map(|(u, _)| u.to_string()).collect(),
            start_time: block[0].1,
            end_time: block[block.len() - 1].1,
        })
        .collect())
}

/// Where a window-graph edge came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeOrigin {
    pub reshare: bool,
    pub historical: bool,
}

/// Graph on one window's users: in-window reshares plus historical edges.
///
/// Vertex `i` is `window.nodes[i]`, so ascending vertex id is activation order.
#[derive(Clone, Debug)]
pub struct WindowGraph {
    window: Window,
    graph: Graph,
    index: HashMap<String, usize>,
    origin: BTreeMap<(usize, usize), EdgeOrigin>,
}

impl WindowGraph {
    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertices(&self) -> &[String] {
        &self.window.nodes
    }

    pub fn vertex_id(&self, user: &str) -> Option<usize> {
        self.index.get(user).copied()
    }

    pub fn user(&self, v: usize) -> &str {
        &self.window.nodes[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edges as user-id pairs, ordered by vertex id.
    pub fn user_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.graph
            .edges()
            .map(|(u, v)| (self.user(u), self.user(v)))
    }

    pub fn edge_origin(&self, u: usize, v: usize) -> Option<EdgeOrigin> {
        self.origin.get(&(u.min(v), u.max(v))).copied()
    }
}

/// Builds the graph of `window`: reshare edges with both endpoints in the
/// window (and time inside its range) together with every social-network edge
/// among the window's users.
pub fn build_window_graph(
    cascade: &Cascade,
    window: &Window,
    social: &SocialNetwork,
) -> WindowGraph {
    let index: HashMap<String, usize> = window
        .nodes
        .iter()
        .enumerate()
        .map(|(i, u)| (u.clone(), i))
        .collect();
    let mut graph = Graph::new(window.nodes.len());
    let mut origin: BTreeMap<(usize, usize), EdgeOrigin> = BTreeMap::new();

    for e in cascade.events() {
        if !window.contains_time(e.time) {
            continue;
        }
        if let (Some(&u), Some(&v)) = (index.get(&e.source), index.get(&e.target)) {
            graph.add_edge(u, v);
            origin.entry((u.min(v), u.max(v))).or_default().reshare = true;
        }
    }
    for (i, user) in window.nodes.iter().enumerate() {
        for other in social.neighbors(user) {
            if let Some(&j) = index.get(other) {
                if i < j {
                    graph.add_edge(i, j);
                    origin.entry((i, j)).or_default().historical = true;
                }
            }
        }
    }
    WindowGraph {
        window: window.clone(),
        graph,
        index,
        origin,
    }
}
