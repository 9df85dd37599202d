use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::PipelineConfig;
use super::io::{read_cascades, read_social, IngestSummary};
use super::report::{
    pattern_at, CorpusReport, NcRow, Phase, PhaseRow, RunCounts, RunMetadata, Timings,
};
use crate::cascade::{build_window_graph, segment, Cascade, SocialNetwork, Window};
use crate::error::{Error, Result};
use crate::motif::MotifPattern;
use crate::num::Real;
use crate::percolation::{coverage_table, PercolationOptions};
use crate::phase::{detect_phases, fit_bandwidth, KernelParams};
use crate::seed;
use crate::stats::{compare_phases, CompareOptions, PhaseCoverage};

/// Randomness root of one cascade: the master seed xor the stable hash of
/// the cascade id.
pub fn cascade_seed(master: u64, cascade_id: &str) -> u64 {
    master ^ seed::stable_hash(cascade_id)
}

/// Steep and inhibition windows of one cascade, detected unless overridden.
pub fn assign_phases<F: Real>(
    config: &PipelineConfig,
    cascade: &Cascade,
    windows: &[Window],
) -> Result<PhaseRow<F>> {
    for (name, w) in [
        ("steep", config.steep_window),
        ("inhibition", config.inhib_window),
    ] {
        if let Some(w) = w.filter(|&w| w >= windows.len()) {
            return Err(Error::param(format!(
                "{name} window {w} out of range for cascade {} with {} windows",
                cascade.id(),
                windows.len()
            )));
        }
    }
    let start = |w: usize| F::lit(windows[w].start_time);
    if let (Some(s), Some(i)) = (config.steep_window, config.inhib_window) {
        return Ok(PhaseRow {
            cascade_id: cascade.id().to_string(),
            t_steep: start(s),
            t_inhib: start(i),
            steep_window: s,
            inhib_window: i,
            fallback: false,
        });
    }
    let grid: Vec<F> = config.bandwidths.iter().map(|&b| F::lit(b)).collect();
    let theta = fit_bandwidth(cascade, &grid)?;
    let params = KernelParams::new(theta, config.grid_points)?;
    let d = detect_phases(
        cascade,
        windows,
        &params,
        F::lit(config.quiescence),
        config.smooth_width,
    )?;
    let mut row = PhaseRow {
        cascade_id: cascade.id().to_string(),
        t_steep: d.t_steep,
        t_inhib: d.t_inhib,
        steep_window: d.steep_window,
        inhib_window: d.inhib_window,
        fallback: d.fallback,
    };
    if let Some(s) = config.steep_window {
        row.steep_window = s;
        row.t_steep = start(s);
    }
    if let Some(i) = config.inhib_window {
        row.inhib_window = i;
        row.t_inhib = start(i);
        row.fallback = false;
    }
    Ok(row)
}

/// Everything computed for one cascade.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeOutcome<F> {
    pub phases: PhaseRow<F>,
    pub rows: Vec<NcRow<F>>,
    pub coverage: PhaseCoverage<F>,
}

pub fn process_cascade<F: Real>(
    config: &PipelineConfig,
    cascade: &Cascade,
    social: &SocialNetwork,
) -> Result<CascadeOutcome<F>> {
    let windows = segment(cascade, config.window_size)?;
    let phases = assign_phases::<F>(config, cascade, &windows)?;
    let options = PercolationOptions {
        strict_pseudocode: config.strict_pseudocode,
    };
    let base = cascade_seed(config.seed, cascade.id());
    let mut rows = Vec::new();
    let mut nc: [BTreeMap<MotifPattern, F>; 2] = Default::default();
    for (slot, (phase, window)) in [
        (Phase::Steep, phases.steep_window),
        (Phase::Inhib, phases.inhib_window),
    ]
    .into_iter()
    .enumerate()
    {
        let wg = build_window_graph(cascade, &windows[window], social);
        let stream = seed::derive(base, window as u64);
        let table = coverage_table::<F>(wg.graph(), config.k, config.restarts, stream, options)?;
        for (pattern, r) in table {
            rows.push(NcRow {
                cascade_id: cascade.id().to_string(),
                window,
                phase,
                catalog_index: pattern.catalog_index(),
                instances: r.instances,
                covered_edges: r.covered_edges.len(),
                total_edges: r.total_edges,
                nc: r.nc,
                iterations: r.iterations,
                restart_id: r.restart_id,
            });
            nc[slot].insert(pattern, r.nc);
        }
    }
    let [steep, inhib] = nc;
    Ok(CascadeOutcome {
        coverage: PhaseCoverage {
            cascade_id: cascade.id().to_string(),
            steep,
            inhib,
        },
        phases,
        rows,
    })
}

/// Rebuilds per-cascade phase coverage from NC rows. Cascades listed in
/// `cascade_ids` but without any row still enter the corpus.
pub fn coverage_from_rows<F: Real>(
    rows: &[NcRow<F>],
    k: usize,
    cascade_ids: &[String],
) -> Result<Vec<PhaseCoverage<F>>> {
    let mut by_id: BTreeMap<&str, PhaseCoverage<F>> = BTreeMap::new();
    let empty = |id: &str| PhaseCoverage {
        cascade_id: id.to_string(),
        steep: BTreeMap::new(),
        inhib: BTreeMap::new(),
    };
    for id in cascade_ids {
        by_id.entry(id).or_insert_with(|| empty(id));
    }
    for r in rows {
        let entry = by_id
            .entry(&r.cascade_id)
            .or_insert_with(|| empty(&r.cascade_id));
        let pattern = pattern_at(k, r.catalog_index)?;
        match r.phase {
            Phase::Steep => entry.steep.insert(pattern, r.nc),
            Phase::Inhib => entry.inhib.insert(pattern, r.nc),
        };
    }
    Ok(by_id.into_values().collect())
}

fn millis(since: Instant) -> u64 {
    since.elapsed().as_millis() as u64
}

/// The per-cascade pipeline over an in-memory corpus. Cascades are processed
/// in parallel and folded in id order.
pub fn run_corpus<F: Real>(
    config: &PipelineConfig,
    cascades: &[Cascade],
    social: &SocialNetwork,
    mut counts: RunCounts,
) -> Result<CorpusReport<F>> {
    config.validate()?;
    let started = Instant::now();
    let mut retained: Vec<&Cascade> = cascades
        .iter()
        .filter(|c| c.activation_count() >= config.min_cascade)
        .collect();
    retained.sort_by(|a, b| a.id().cmp(b.id()));
    counts.cascades_retained = retained.len();
    counts.cascades_below_min = cascades.len() - retained.len();
    counts.social_edges = social.edge_count();
    if retained.is_empty() {
        return Err(Error::NoRetainedCascades);
    }
    log::info!(
        "processing {} cascades ({} below the minimum size)",
        retained.len(),
        counts.cascades_below_min
    );

    let outcomes: Vec<CascadeOutcome<F>> = retained
        .par_iter()
        .map(|c| process_cascade(config, c, social))
        .collect::<Result<_>>()?;
    let cascades_ms = millis(started);

    let compare_started = Instant::now();
    let (mut phases, mut nc_rows, mut corpus) = (Vec::new(), Vec::new(), Vec::new());
    for o in outcomes {
        phases.push(o.phases);
        nc_rows.extend(o.rows);
        corpus.push(o.coverage);
    }
    let tests = compare_phases(
        &corpus,
        CompareOptions {
            alpha: F::lit(config.alpha),
            absent_as_zero: config.absent_as_zero,
        },
    )?;
    counts.fallback_phases = phases.iter().filter(|p| p.fallback).count();
    counts.nc_rows = nc_rows.len();
    counts.patterns = tests.len();
    counts.patterns_tested = tests.iter().filter(|t| !t.skipped()).count();
    counts.patterns_significant = tests.iter().filter(|t| t.significant()).count();

    Ok(CorpusReport {
        phases,
        nc_rows,
        tests,
        metadata: RunMetadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: format!("{:016x}", config.hash()),
            config: config.clone(),
            counts,
            timings: Timings {
                ingest_ms: 0,
                cascades_ms,
                compare_ms: millis(compare_started),
                total_ms: millis(started),
            },
        },
    })
}

/// Reads the configured inputs and runs the whole pipeline.
pub fn run_pipeline<F: Real>(config: &PipelineConfig) -> Result<CorpusReport<F>> {
    config.validate()?;
    let started = Instant::now();
    let path = config
        .cascades
        .as_deref()
        .ok_or_else(|| Error::Config("no cascade input configured".into()))?;
    let (cascades, ingest): (Vec<Cascade>, IngestSummary) = read_cascades(path)?;
    let (social, malformed_social) = match config.social.as_deref() {
        Some(p) => read_social(p)?,
        None => (SocialNetwork::new(), 0),
    };
    let counts = RunCounts {
        ingest,
        malformed_social_lines: malformed_social,
        ..RunCounts::default()
    };
    let ingest_ms = millis(started);
    let mut report = run_corpus(config, &cascades, &social, counts)?;
    report.metadata.timings.ingest_ms = ingest_ms;
    report.metadata.timings.total_ms = millis(started);
    Ok(report)
}
