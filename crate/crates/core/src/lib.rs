//! Motif-based analysis of information cascades.
//!
//! A cascade (a time-ordered log of reshare events) is cut into windows of a
//! fixed number of newly activated users. Each window becomes an undirected
//! graph made of in-window reshare edges plus historical interaction edges.
//! For every connected 5-node pattern found in a window, the motif percolation
//! procedure grows a covered structure from a seed instance through chains of
//! instances sharing `k - 1` vertices, and reports the fraction of window
//! edges it reaches (network coverage, NC). Coverage populations from the
//! steep-growth and inhibition windows of many cascades are then compared
//! with Welch's two-sample t-test.
//!
//! Numeric code (intensity estimation, coverage ratios, hypothesis tests) is
//! generic over [`Real`]; the aliases below fix the scalar to `f64` or `f32`.

pub mod cascade;
pub mod error;
pub mod graph;
pub mod motif;
pub mod num;
pub mod percolation;
pub mod phase;
pub mod pipeline;
pub mod stats;

mod bitset;
pub mod seed;

pub use cascade::{
    build_social_network, build_window_graph, ingest_cascade, segment, Cascade, ReshareEvent,
    SocialNetwork, Window, WindowGraph,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use motif::{
    canonical_code, catalog, esu_enumerate, instances_by_pattern, rand_esu, MotifCatalog,
    MotifInstance, MotifPattern, SmallGraph,
};
pub use num::Real;
pub use percolation::{
    coverage, coverage_table, percolate, select_seed, CoverageResult, PercolationOptions,
};
pub use phase::{
    detect_phases, find_extrema, fit_bandwidth, intensity, IntensitySeries, KernelParams,
    PhaseDetection,
};
pub use stats::{compare_phases, welch_t_test, PatternTest, SampleSummary, TTestResult};

pub use pipeline::{
    emit_report, generate_synthetic, run_corpus, run_pipeline, CorpusReport, PipelineConfig,
    SyntheticSpec,
};

pub type IntensityF64 = IntensitySeries<f64>;
pub type IntensityF32 = IntensitySeries<f32>;
pub type KernelParamsF64 = KernelParams<f64>;
pub type KernelParamsF32 = KernelParams<f32>;
pub type PhaseDetectionF64 = PhaseDetection<f64>;
pub type PhaseDetectionF32 = PhaseDetection<f32>;
pub type CoverageF64 = CoverageResult<f64>;
pub type CoverageF32 = CoverageResult<f32>;
pub type TTestF64 = TTestResult<f64>;
pub type TTestF32 = TTestResult<f32>;
pub type PatternTestF64 = PatternTest<f64>;
pub type PatternTestF32 = PatternTest<f32>;
pub type CorpusReportF64 = CorpusReport<f64>;
pub type CorpusReportF32 = CorpusReport<f32>;
