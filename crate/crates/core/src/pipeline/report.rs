use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use super::io::IngestSummary;
use crate::error::Result;
use crate::motif::MotifPattern;
use crate::num::Real;
use crate::stats::PatternTest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Steep,
    Inhib,
}

impl Phase {
    pub const BOTH: [Phase; 2] = [Phase::Steep, Phase::Inhib];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Steep => "steep",
            Phase::Inhib => "inhib",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow<F> {
    pub cascade_id: String,
    pub t_steep: F,
    pub t_inhib: F,
    pub steep_window: usize,
    pub inhib_window: usize,
    pub fallback: bool,
}

/// Coverage of one pattern in one phase window of one cascade.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcRow<F> {
    pub cascade_id: String,
    pub window: usize,
    pub phase: Phase,
    pub catalog_index: usize,
    pub instances: usize,
    pub covered_edges: usize,
    pub total_edges: usize,
    pub nc: F,
    pub iterations: usize,
    pub restart_id: usize,
}

/// Test outcome of one pattern; the numeric test columns are empty when
/// the pattern was skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow<F> {
    pub catalog_index: usize,
    pub n_steep: usize,
    pub n_inhib: usize,
    pub mean_steep: F,
    pub mean_inhib: F,
    pub t: Option<F>,
    pub dof: Option<F>,
    pub p: Option<F>,
    pub significant: bool,
    pub p_bonferroni: Option<F>,
}

impl<F: Copy> From<&PatternTest<F>> for StatsRow<F> {
    fn from(r: &PatternTest<F>) -> Self {
        StatsRow {
            catalog_index: r.pattern.catalog_index(),
            n_steep: r.n_steep,
            n_inhib: r.n_inhib,
            mean_steep: r.mean_steep,
            mean_inhib: r.mean_inhib,
            t: r.test.map(|t| t.t),
            dof: r.test.map(|t| t.dof),
            p: r.test.map(|t| t.p),
            significant: r.test.is_some_and(|t| t.significant),
            p_bonferroni: r.p_bonferroni,
        }
    }
}

/// Mean NC of one pattern in one phase, for bar charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRow<F> {
    pub phase: Phase,
    pub catalog_index: usize,
    pub edge_count: usize,
    pub mean_nc: F,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunCounts {
    pub ingest: IngestSummary,
    pub malformed_social_lines: usize,
    pub social_edges: usize,
    pub cascades_retained: usize,
    pub cascades_below_min: usize,
    pub fallback_phases: usize,
    pub nc_rows: usize,
    pub patterns: usize,
    pub patterns_tested: usize,
    pub patterns_significant: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub ingest_ms: u64,
    pub cascades_ms: u64,
    pub compare_ms: u64,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub version: String,
    pub config_hash: String,
    pub config: PipelineConfig,
    pub counts: RunCounts,
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusReport<F> {
    pub phases: Vec<PhaseRow<F>>,
    pub nc_rows: Vec<NcRow<F>>,
    pub tests: Vec<PatternTest<F>>,
    pub metadata: RunMetadata,
}

impl<F: Real> CorpusReport<F> {
    pub fn stats_rows(&self) -> Vec<StatsRow<F>> {
        self.tests.iter().map(StatsRow::from).collect()
    }

    pub fn plot_rows(&self) -> Vec<PlotRow<F>> {
        plot_rows(&self.tests)
    }

    pub fn significant(&self) -> impl Iterator<Item = &PatternTest<F>> {
        self.tests.iter().filter(|t| t.significant())
    }
}

pub fn plot_rows<F: Copy>(tests: &[PatternTest<F>]) -> Vec<PlotRow<F>> {
    let row = |phase, t: &PatternTest<F>, mean_nc| PlotRow {
        phase,
        catalog_index: t.pattern.catalog_index(),
        edge_count: t.pattern.edge_count(),
        mean_nc,
    };
    let steep = tests.iter().map(|t| row(Phase::Steep, t, t.mean_steep));
    let inhib = tests.iter().map(|t| row(Phase::Inhib, t, t.mean_inhib));
    steep.chain(inhib).collect()
}

pub const NC_HEADER: [&str; 10] = [
    "cascade_id",
    "window",
    "phase",
    "catalog_index",
    "instances",
    "covered_edges",
    "total_edges",
    "nc",
    "iterations",
    "restart_id",
];
pub const STATS_HEADER: [&str; 10] = [
    "catalog_index",
    "n_steep",
    "n_inhib",
    "mean_steep",
    "mean_inhib",
    "t",
    "dof",
    "p",
    "significant",
    "p_bonferroni",
];
pub const PLOT_HEADER: [&str; 4] = ["phase", "catalog_index", "edge_count", "mean_nc"];

/// Writes the header even when there are no rows.
pub fn write_csv<T: Serialize>(writer: impl Write, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(reader: impl Read) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Paths of the files written by [`emit_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportFiles {
    pub nc: PathBuf,
    pub stats: PathBuf,
    pub plot: PathBuf,
    pub phases: PathBuf,
    pub metadata: PathBuf,
}

impl ReportFiles {
    pub fn in_dir(dir: &Path) -> Self {
        ReportFiles {
            nc: dir.join("nc.csv"),
            stats: dir.join("stats.csv"),
            plot: dir.join("plot.csv"),
            phases: dir.join("phases.json"),
            metadata: dir.join("metadata.json"),
        }
    }

    pub fn csvs(&self) -> [&Path; 3] {
        [&self.nc, &self.stats, &self.plot]
    }
}

/// Tables read back from a report directory.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportTables<F> {
    pub phases: Vec<PhaseRow<F>>,
    pub nc_rows: Vec<NcRow<F>>,
    pub stats: Vec<StatsRow<F>>,
    pub plot: Vec<PlotRow<F>>,
    pub metadata: RunMetadata,
}

impl<F: Real> ReportTables<F> {
    pub fn of(report: &CorpusReport<F>) -> Self {
        ReportTables {
            phases: report.phases.clone(),
            nc_rows: report.nc_rows.clone(),
            stats: report.stats_rows(),
            plot: report.plot_rows(),
            metadata: report.metadata.clone(),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes `nc.csv`, `stats.csv`, `plot.csv`, `phases.json` and
/// `metadata.json` into `dir`, creating it if needed.
pub fn emit_report<F>(report: &CorpusReport<F>, dir: &Path) -> Result<ReportFiles>
where
    F: Real + Serialize,
{
    std::fs::create_dir_all(dir)?;
    let files = ReportFiles::in_dir(dir);
    write_csv(create(&files.nc)?, &NC_HEADER, &report.nc_rows)?;
    write_csv(create(&files.stats)?, &STATS_HEADER, &report.stats_rows())?;
    write_csv(create(&files.plot)?, &PLOT_HEADER, &report.plot_rows())?;
    let mut out = create(&files.phases)?;
    serde_json::to_writer_pretty(&mut out, &report.phases)?;
    writeln!(out)?;
    out.flush()?;
    let mut out = create(&files.metadata)?;
    serde_json::to_writer_pretty(&mut out, &report.metadata)?;
    writeln!(out)?;
    out.flush()?;
    Ok(files)
}

pub fn read_report<F: DeserializeOwned>(dir: &Path) -> Result<ReportTables<F>> {
    let files = ReportFiles::in_dir(dir);
    Ok(ReportTables {
        phases: serde_json::from_reader(File::open(&files.phases)?)?,
        nc_rows: read_csv(File::open(&files.nc)?)?,
        stats: read_csv(File::open(&files.stats)?)?,
        plot: read_csv(File::open(&files.plot)?)?,
        metadata: serde_json::from_reader(File::open(&files.metadata)?)?,
    })
}

/// The pattern behind a catalog index of size-`k` patterns.
pub fn pattern_at(k: usize, catalog_index: usize) -> Result<MotifPattern> {
    crate::motif::catalog(k)?.get(catalog_index).ok_or_else(|| {
        crate::Error::param(format!(
            "no size-{k} pattern at catalog index {catalog_index}"
        ))
    })
}
