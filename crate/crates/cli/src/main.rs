mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use cascade_motifs::pipeline::PipelineConfig;
use cascade_motifs::{Error, Result};
use clap::error::ErrorKind;
use clap::{ArgAction, Args, Parser, Subcommand};

/// Motif percolation analysis of information cascades.
#[derive(Debug, Parser)]
#[command(name = "cascade-motifs", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand. They override values read from
/// `--config`.
#[derive(Debug, Args)]
struct Global {
    /// Key-value configuration file (`key = value` per line).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cascade events, CSV (`cascade_id,source,target,time`) or JSON lines.
    #[arg(long, global = true)]
    cascades: Option<PathBuf>,
    /// Historical interaction edges, one whitespace-separated `u v` per line.
    #[arg(long, global = true)]
    social: Option<PathBuf>,
    /// Output file or directory.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Activations per window (W).
    #[arg(long, global = true)]
    window_size: Option<usize>,
    /// Motif size.
    #[arg(short, long, global = true)]
    k: Option<usize>,
    /// Smallest cascade, in activations, kept for analysis.
    #[arg(long, global = true)]
    min_cascade: Option<usize>,
    /// Significance level of the per-pattern tests.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Percolation restarts per pattern; the best coverage is kept.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Admit only instances with exactly k - 1 covered vertices.
    #[arg(long, global = true)]
    strict_pseudocode: bool,
    /// Leave cascades lacking a pattern out of that pattern's sample instead
    /// of counting them as NC = 0.
    #[arg(long, global = true)]
    drop_absent: bool,
    /// Use this window as the steep phase instead of detecting it.
    #[arg(long, global = true)]
    steep_window: Option<usize>,
    /// Use this window as the inhibition phase instead of detecting it.
    #[arg(long, global = true)]
    inhib_window: Option<usize>,
    /// Inhibition threshold as a fraction of the peak intensity.
    #[arg(long, global = true)]
    quiescence: Option<f64>,
    /// Moving-average width for extrema detection (odd).
    #[arg(long, global = true)]
    smooth_width: Option<usize>,
    /// Intensity evaluation grid size.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Comma-separated candidate kernel bandwidths in seconds.
    #[arg(long, global = true)]
    bandwidths: Option<String>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read cascades and the social network and summarise them.
    Ingest,
    /// List the windows of each cascade.
    Segment {
        #[arg(long)]
        cascade: Option<String>,
    },
    /// Steep and inhibition windows of every retained cascade, as JSON.
    DetectPhases,
    /// Export the pattern catalog, or count pattern instances in one window.
    Motifs {
        /// Print the size-k catalog as JSON.
        #[arg(long)]
        catalog: bool,
        #[arg(long, required_unless_present = "catalog")]
        cascade: Option<String>,
        #[arg(long, required_unless_present = "catalog")]
        window: Option<usize>,
    },
    /// Coverage rows for the phase windows of every (or one) retained cascade.
    Percolate {
        #[arg(long)]
        cascade: Option<String>,
    },
    /// Welch tests from a coverage CSV.
    Compare {
        #[arg(long)]
        nc: PathBuf,
        /// Phases JSON listing every cascade of the corpus.
        #[arg(long)]
        phases: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with planted historical edges.
    Simulate(SimulateArgs),
    /// Rebuild a report directory from coverage rows and phases.
    Report {
        #[arg(long)]
        nc: PathBuf,
        #[arg(long)]
        phases: PathBuf,
    },
    /// Run the full pipeline and write a report directory.
    Run,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 200)]
    n_cascades: usize,
    /// Activations per cascade, original poster included.
    #[arg(long, default_value_t = 320)]
    nodes: usize,
    #[arg(long, default_value_t = 0.01)]
    steep_density: f64,
    #[arg(long, default_value_t = 0.03)]
    inhib_density: f64,
    #[arg(long, default_value_t = 60.0)]
    base_interval: f64,
    #[arg(long, default_value_t = 10.0)]
    burst_ratio: f64,
    #[arg(long, default_value_t = 1)]
    burst_window: usize,
    #[arg(long, default_value_t = 1.0)]
    tail_decay: f64,
    #[arg(long, default_value_t = 0.9)]
    local_parent: f64,
}

impl Global {
    fn config(&self) -> Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field.clone() {
                    c.$field = v;
                })*
            };
        }
        take!(
            window_size,
            k,
            min_cascade,
            alpha,
            restarts,
            seed,
            quiescence,
            smooth_width,
            grid_points
        );
        if let Some(b) = &self.bandwidths {
            c.set("bandwidths", b)?;
        }
        if self.steep_window.is_some() {
            c.steep_window = self.steep_window;
        }
        if self.inhib_window.is_some() {
            c.inhib_window = self.inhib_window;
        }
        if self.strict_pseudocode {
            c.strict_pseudocode = true;
        }
        if self.drop_absent {
            c.absent_as_zero = false;
        }
        for (slot, flag) in [
            (&mut c.cascades, &self.cascades),
            (&mut c.social, &self.social),
            (&mut c.output, &self.output),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        c.validate()?;
        Ok(c)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match cli
        .global
        .config()
        .and_then(|config| commands::dispatch(&cli.command, config))
    {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
