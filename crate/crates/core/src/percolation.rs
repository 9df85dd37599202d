//! Motif percolation: grow a covered structure from a seed instance through
//! instances that share `k - 1` vertices with it, and measure the fraction of
//! window edges reached (network coverage, NC).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{instances_by_pattern, MotifInstance, MotifPattern};
use crate::num::Real;
use crate::seed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PercolationOptions {
    /// Admit only instances with exactly `k - 1` covered vertices. When false,
    /// instances whose vertices are all covered also contribute their edges.
    pub strict_pseudocode: bool,
}

/// One pass of the percolation loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassRecord {
    /// `(instance index, covered vertices of that instance at admission)`.
    pub admitted: Vec<(usize, usize)>,
    pub covered_vertices: usize,
    pub covered_edges: usize,
    pub new_edges: usize,
}

/// Full outcome of one percolation run, including the per-pass trace.
#[derive(Clone, Debug)]
pub struct Percolation {
    pub seed_index: usize,
    pub covered_vertices: Vec<usize>,
    pub covered_edges: Vec<(usize, usize)>,
    pub passes: Vec<PassRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageResult<F> {
    pub pattern: MotifPattern,
    pub instances: usize,
    pub covered_edges: Vec<(usize, usize)>,
    pub covered_vertices: Vec<usize>,
    pub total_edges: usize,
    /// `covered_edges.len() / total_edges`.
    pub nc: F,
    pub seed: Option<MotifInstance>,
    pub iterations: usize,
    pub restart_id: usize,
    /// Set when the pattern had no instances in the graph.
    pub no_instances: bool,
}

impl<F: Real> CoverageResult<F> {
    fn empty(pattern: MotifPattern, graph: &Graph) -> Self {
        CoverageResult {
            pattern,
            instances: 0,
            covered_edges: Vec::new(),
            covered_vertices: Vec::new(),
            total_edges: graph.edge_count(),
            nc: F::zero(),
            seed: None,
            iterations: 0,
            restart_id: 0,
            no_instances: true,
        }
    }
}

/// The instance with the largest sum of graph degrees over its vertices.
/// Ties are broken uniformly with `rng`, which is only drawn from on a tie.
pub fn select_seed<'a, R: Rng>(
    instances: &'a [MotifInstance],
    graph: &Graph,
    rng: &mut R,
) -> Result<&'a MotifInstance> {
    select_seed_index(instances, graph, rng).map(|i| &instances[i])
}

fn select_seed_index<R: Rng>(
    instances: &[MotifInstance],
    graph: &Graph,
    rng: &mut R,
) -> Result<usize> {
    let sums: Vec<usize> = instances.iter().map(|m| m.degree_sum(graph)).collect();
    let best = *sums.iter().max().ok_or(Error::NoInstances)?;
    let tied: Vec<usize> = (0..sums.len()).filter(|&i| sums[i] == best).collect();
    Ok(if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.gen_range(0..tied.len())]
    })
}

/// Dense upper-triangular edge set.
struct EdgeSet {
    rows: Vec<VertexSet>,
    len: usize,
}

impl EdgeSet {
    fn new(n: usize) -> Self {
        EdgeSet {
            rows: vec![VertexSet::with_capacity(n); n],
            len: 0,
        }
    }

    fn insert(&mut self, (u, v): (usize, usize)) -> bool {
        let fresh = self.rows[u].insert(v);
        self.len += fresh as usize;
        fresh
    }

    fn contains(&self, (u, v): (usize, usize)) -> bool {
        self.rows[u].contains(v)
    }

    fn to_vec(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |v| (u, v)))
            .collect()
    }
}

/// Runs the percolation loop from `instances[seed_index]` and keeps the
/// per-pass trace.
///
/// Each pass scans every instance and collects the edges and vertices of the
/// admitted ones into batch sets; the batches are merged into the covered sets
/// only after the pass. The loop stops after the first pass that adds no edge.
pub fn percolate_traced(
    graph: &Graph,
    instances: &[MotifInstance],
    seed_index: usize,
    options: PercolationOptions,
) -> Result<Percolation> {
    let seed = instances
        .get(seed_index)
        .ok_or_else(|| Error::param(format!("seed index {seed_index} out of range")))?;
    if instances.iter().any(|m| m.pattern != seed.pattern) {
        return Err(Error::MixedPatterns);
    }
    let n = graph.vertex_count();
    let k = seed.k();

    let mut vertices = VertexSet::with_capacity(n);
    let mut edges = EdgeSet::new(n);
    for &v in &seed.vertices {
        vertices.insert(v);
    }
    for e in seed.edges(graph) {
        edges.insert(e);
    }

    let mut passes = Vec::new();
    loop {
        let mut batch_vertices = VertexSet::with_capacity(n);
        let mut batch_edges = Vec::new();
        let mut admitted = Vec::new();
        for (i, m) in instances.iter().enumerate() {
            let k_cov = m.vertices.iter().filter(|&&v| vertices.contains(v)).count();
            if k_cov + 1 == k || (!options.strict_pseudocode && k_cov == k) {
                admitted.push((i, k_cov));
                batch_edges.extend(m.edges(graph));
                for &v in &m.vertices {
                    batch_vertices.insert(v);
                }
            }
        }
        let new_edges = batch_edges.into_iter().filter(|&e| edges.insert(e)).count();
        vertices.union_with(&batch_vertices);
        passes.push(PassRecord {
            admitted,
            covered_vertices: vertices.len(),
            covered_edges: edges.len,
            new_edges,
        });
        if new_edges == 0 {
            break;
        }
    }
    debug_assert!(graph.edges().filter(|&e| edges.contains(e)).count() == edges.len);

    Ok(Percolation {
        seed_index,
        covered_vertices: vertices.iter().collect(),
        covered_edges: edges.to_vec(),
        passes,
    })
}

/// One percolation run from `seed`, which must be one of `instances`.
pub fn percolate<F: Real>(
    graph: &Graph,
    instances: &[MotifInstance],
    seed: &MotifInstance,
    options: PercolationOptions,
) -> Result<CoverageResult<F>> {
    let seed_index = instances
        .iter()
        .position(|m| m == seed)
        .ok_or_else(|| Error::param("seed is not one of the instances"))?;
    let run = percolate_traced(graph, instances, seed_index, options)?;
    Ok(into_result(graph, instances, run, 0))
}

fn into_result<F: Real>(
    graph: &Graph,
    instances: &[MotifInstance],
    run: Percolation,
    restart_id: usize,
) -> CoverageResult<F> {
    let total = graph.edge_count();
    let nc = if total == 0 {
        F::zero()
    } else {
        F::from_count(run.covered_edges.len()) / F::from_count(total)
    };
    let seed = instances[run.seed_index].clone();
    CoverageResult {
        pattern: seed.pattern,
        instances: instances.len(),
        covered_edges: run.covered_edges,
        covered_vertices: run.covered_vertices,
        total_edges: total,
        nc,
        seed: Some(seed),
        iterations: run.passes.len(),
        restart_id,
        no_instances: false,
    }
}

/// Best of `restarts` percolation runs for one pattern.
///
/// Restart 0 starts from the degree-sum seed; restarts `1..R` start from
/// distinct instances drawn uniformly without replacement from the rest
/// (fewer runs happen when instances run out). The result with the most
/// covered edges wins, ties going to the lowest restart id.
pub fn coverage<F: Real, R: Rng>(
    graph: &Graph,
    pattern: MotifPattern,
    instances: &[MotifInstance],
    restarts: usize,
    rng: &mut R,
    options: PercolationOptions,
) -> Result<CoverageResult<F>> {
    if restarts == 0 {
        return Err(Error::param("restarts must be at least 1"));
    }
    if instances.is_empty() {
        return Ok(CoverageResult::empty(pattern, graph));
    }
    if instances[0].pattern != pattern {
        return Err(Error::MixedPatterns);
    }
    let first = select_seed_index(instances, graph, rng)?;
    let mut best = into_result(
        graph,
        instances,
        percolate_traced(graph, instances, first, options)?,
        0,
    );
    let mut pool: Vec<usize> = (0..instances.len()).filter(|&i| i != first).collect();
    for restart_id in 1..restarts {
        if pool.is_empty() {
            break;
        }
        let seed = pool.swap_remove(rng.gen_range(0..pool.len()));
        let run = percolate_traced(graph, instances, seed, options)?;
        if run.covered_edges.len() > best.covered_edges.len() {
            best = into_result(graph, instances, run, restart_id);
        }
    }
    Ok(best)
}

/// Coverage for every pattern present in `graph`, in catalog order.
///
/// Each pattern draws from its own stream derived from `rng_seed` and the
/// pattern code, so results do not depend on which other patterns occur.
pub fn coverage_table<F: Real>(
    graph: &Graph,
    k: usize,
    restarts: usize,
    rng_seed: u64,
    options: PercolationOptions,
) -> Result<BTreeMap<MotifPattern, CoverageResult<F>>> {
    let mut table = BTreeMap::new();
    for (pattern, instances) in instances_by_pattern(graph, k)? {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(rng_seed, pattern.code() as u64));
        let result = coverage(graph, pattern, &instances, restarts, &mut rng, options)?;
        table.insert(pattern, result);
    }
    Ok(table)
}
