use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cascade_motifs::pipeline::{
    assign_phases, coverage_from_rows, emit_report, generate_synthetic, process_cascade,
    read_cascades, read_csv, read_social, run_pipeline, write_csv, BurstProfile, CorpusReport,
    IngestSummary, NcRow, PhaseRow, PipelineConfig, RunCounts, RunMetadata, StatsRow,
    SyntheticSpec, Timings, NC_HEADER, STATS_HEADER,
};
use cascade_motifs::stats::{compare_phases, CompareOptions, PatternTest};
use cascade_motifs::{
    build_window_graph, catalog, instances_by_pattern, segment, Cascade, Error, Result,
    SocialNetwork,
};
use serde_json::json;

use crate::{Command, SimulateArgs};

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("--{flag} is required for this command")))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

struct Inputs {
    cascades: Vec<Cascade>,
    ingest: IngestSummary,
    social: SocialNetwork,
    malformed_social: usize,
}

fn load(config: &PipelineConfig) -> Result<Inputs> {
    let (cascades, ingest) = read_cascades(required(&config.cascades, "cascades")?)?;
    let (social, malformed_social) = match config.social.as_deref() {
        Some(p) => read_social(p)?,
        None => (SocialNetwork::new(), 0),
    };
    Ok(Inputs {
        cascades,
        ingest,
        social,
        malformed_social,
    })
}

impl Inputs {
    fn retained<'a>(
        &'a self,
        config: &'a PipelineConfig,
        only: Option<&'a str>,
    ) -> Result<Vec<&'a Cascade>> {
        let kept: Vec<&Cascade> = self
            .cascades
            .iter()
            .filter(|c| c.activation_count() >= config.min_cascade)
            .filter(|c| only.is_none_or(|id| c.id() == id))
            .collect();
        if let Some(id) = only.filter(|_| kept.is_empty()) {
            return Err(Error::param(format!("no retained cascade with id {id:?}")));
        }
        if kept.is_empty() {
            return Err(Error::NoRetainedCascades);
        }
        Ok(kept)
    }
}

pub(crate) fn dispatch(command: &Command, config: PipelineConfig) -> Result<()> {
    let out = config.output.as_deref();
    match command {
        Command::Ingest => {
            let inputs = load(&config)?;
            let cascades: Vec<_> = inputs
                .cascades
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id(),
                        "activations": c.activation_count(),
                        "duration": c.duration(),
                        "windows": c.activation_count() / config.window_size,
                        "retained": c.activation_count() >= config.min_cascade,
                    })
                })
                .collect();
            write_json(
                out,
                &json!({
                    "records": inputs.ingest.records,
                    "malformed_records": inputs.ingest.malformed_records,
                    "empty_cascades": inputs.ingest.empty_cascades,
                    "social_edges": inputs.social.edge_count(),
                    "malformed_social_lines": inputs.malformed_social,
                    "cascades": cascades,
                }),
            )
        }
        Command::Segment { cascade } => {
            let inputs = load(&config)?;
            let mut rows = Vec::new();
            for c in inputs
                .cascades
                .iter()
                .filter(|c| cascade.as_deref().is_none_or(|id| c.id() == id))
            {
                match segment(c, config.window_size) {
                    Ok(windows) => rows.extend(windows.iter().map(|w| {
                        json!({
                            "cascade_id": c.id(),
                            "window": w.index,
                            "start_time": w.start_time,
                            "end_time": w.end_time,
                            "nodes": w.nodes,
                        })
                    })),
                    Err(e) => log::warn!("cascade {}: {e}", c.id()),
                }
            }
            write_json(out, &json!(rows))
        }
        Command::DetectPhases => {
            let inputs = load(&config)?;
            let phases = inputs
                .retained(&config, None)?
                .into_iter()
                .map(|c| assign_phases::<f64>(&config, c, &segment(c, config.window_size)?))
                .collect::<Result<Vec<_>>>()?;
            write_json(out, &json!(phases))
        }
        Command::Motifs { catalog: true, .. } => {
            let mut w = sink(out)?;
            writeln!(w, "{}", catalog(config.k)?.to_json())?;
            w.flush()?;
            Ok(())
        }
        Command::Motifs {
            cascade, window, ..
        } => {
            let inputs = load(&config)?;
            let (id, q) = (
                cascade.as_deref().unwrap_or_default(),
                window.unwrap_or_default(),
            );
            let c = inputs
                .cascades
                .iter()
                .find(|c| c.id() == id)
                .ok_or_else(|| Error::param(format!("no cascade with id {id:?}")))?;
            let windows = segment(c, config.window_size)?;
            let w = windows.get(q).ok_or_else(|| {
                Error::param(format!("cascade {id:?} has {} windows", windows.len()))
            })?;
            let wg = build_window_graph(c, w, &inputs.social);
            let rows: Vec<_> = instances_by_pattern(wg.graph(), config.k)?
                .iter()
                .map(|(p, inst)| {
                    json!({
                        "catalog_index": p.catalog_index(),
                        "edge_count": p.edge_count(),
                        "code": p.code(),
                        "instances": inst.len(),
                    })
                })
                .collect();
            write_json(
                out,
                &json!({
                    "cascade_id": id,
                    "window": q,
                    "vertices": wg.vertices().len(),
                    "edges": wg.edge_count(),
                    "patterns": rows,
                }),
            )
        }
        Command::Percolate { cascade } => {
            let inputs = load(&config)?;
            let mut rows = Vec::new();
            for c in inputs.retained(&config, cascade.as_deref())? {
                rows.extend(process_cascade::<f64>(&config, c, &inputs.social)?.rows);
            }
            write_csv(sink(out)?, &NC_HEADER, &rows)
        }
        Command::Compare { nc, phases } => {
            let (_, tests) = compare_files(&config, nc, phases.as_deref())?;
            let rows: Vec<StatsRow<f64>> = tests.iter().map(StatsRow::from).collect();
            write_csv(sink(out)?, &STATS_HEADER, &rows)
        }
        Command::Report { nc, phases } => {
            let dir = required(&config.output, "output")?;
            let (phase_rows, tests) = compare_files(&config, nc, Some(phases))?;
            let nc_rows: Vec<NcRow<f64>> = read_csv(File::open(nc)?)?;
            let counts = RunCounts {
                cascades_retained: phase_rows.len(),
                fallback_phases: phase_rows.iter().filter(|p| p.fallback).count(),
                nc_rows: nc_rows.len(),
                patterns: tests.len(),
                patterns_tested: tests.iter().filter(|t| !t.skipped()).count(),
                patterns_significant: tests.iter().filter(|t| t.significant()).count(),
                ..RunCounts::default()
            };
            let report = CorpusReport {
                phases: phase_rows,
                nc_rows,
                tests,
                metadata: RunMetadata {
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    config_hash: format!("{:016x}", config.hash()),
                    config: config.clone(),
                    counts,
                    timings: Timings::default(),
                },
            };
            emit_report(&report, dir)?;
            Ok(())
        }
        Command::Simulate(args) => simulate(&config, args),
        Command::Run => {
            let dir = required(&config.output, "output")?.to_path_buf();
            let report = run_pipeline::<f64>(&config)?;
            emit_report(&report, &dir)?;
            let counts = &report.metadata.counts;
            let mut w = sink(None)?;
            writeln!(
                w,
                "{} cascades retained, {} patterns tested, {} significant at alpha = {}",
                counts.cascades_retained,
                counts.patterns_tested,
                counts.patterns_significant,
                config.alpha
            )?;
            for t in report.significant() {
                let test = t.test.expect("significant patterns were tested");
                writeln!(
                    w,
                    "  pattern {:2} ({} edges): steep {:.4}, inhib {:.4}, p = {:.3e}",
                    t.pattern.catalog_index(),
                    t.pattern.edge_count(),
                    t.mean_steep,
                    t.mean_inhib,
                    test.p
                )?;
            }
            writeln!(w, "report written to {}", dir.display())?;
            w.flush()?;
            Ok(())
        }
    }
}

type Compared = (Vec<PhaseRow<f64>>, Vec<PatternTest<f64>>);

fn compare_files(config: &PipelineConfig, nc: &Path, phases: Option<&Path>) -> Result<Compared> {
    let rows: Vec<NcRow<f64>> = read_csv(File::open(nc)?)?;
    let phase_rows: Vec<PhaseRow<f64>> = match phases {
        Some(p) => serde_json::from_reader(File::open(p)?)?,
        None => Vec::new(),
    };
    let ids: Vec<String> = phase_rows.iter().map(|p| p.cascade_id.clone()).collect();
    let corpus = coverage_from_rows(&rows, config.k, &ids)?;
    let tests = compare_phases(
        &corpus,
        CompareOptions {
            alpha: config.alpha,
            absent_as_zero: config.absent_as_zero,
        },
    )?;
    Ok((phase_rows, tests))
}

fn simulate(config: &PipelineConfig, args: &SimulateArgs) -> Result<()> {
    let dir = required(&config.output, "output")?;
    let spec = SyntheticSpec {
        n_cascades: args.n_cascades,
        nodes_per_cascade: args.nodes,
        window_size: config.window_size,
        burst: BurstProfile {
            base_interval: args.base_interval,
            burst_ratio: args.burst_ratio,
            burst_window: args.burst_window,
            tail_decay: args.tail_decay,
        },
        steep_density: args.steep_density,
        inhib_density: args.inhib_density,
        local_parent: args.local_parent,
        seed: config.seed,
    };
    let corpus = generate_synthetic(&spec)?;
    let (events, social) = corpus.write(dir)?;
    let planted = dir.join("planted.json");
    write_json(
        Some(&planted),
        &json!({ "generator": spec, "windows": corpus.planted }),
    )?;
    let mut w = sink(None)?;
    for p in [events, social, planted] {
        writeln!(w, "{}", p.display())?;
    }
    w.flush()?;
    Ok(())
}
