//! End-to-end orchestration: configuration, input readers, the synthetic
//! corpus generator, the per-cascade pipeline and report files.

mod config;
mod io;
mod report;
mod run;
mod synth;

pub use config::{
    default_bandwidths, PipelineConfig, DEFAULT_K, DEFAULT_MIN_CASCADE, DEFAULT_QUIESCENCE,
    DEFAULT_SMOOTH_WIDTH, DEFAULT_WINDOW_SIZE,
};
pub use io::{
    group_cascades, read_cascades, read_csv_events, read_jsonl_events, read_social,
    write_events_csv, write_social, IngestSummary, InputFormat, RawEvent,
};
pub use report::{
    emit_report, pattern_at, plot_rows, read_csv, read_report, write_csv, CorpusReport, NcRow,
    Phase, PhaseRow, PlotRow, ReportFiles, ReportTables, RunCounts, RunMetadata, StatsRow, Timings,
    NC_HEADER, PLOT_HEADER, STATS_HEADER,
};
pub use run::{
    assign_phases, cascade_seed, coverage_from_rows, process_cascade, run_corpus, run_pipeline,
    CascadeOutcome,
};
pub use synth::{generate_synthetic, BurstProfile, PlantedWindow, SyntheticCorpus, SyntheticSpec};
