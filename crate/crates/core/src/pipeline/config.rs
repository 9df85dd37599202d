use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{DEFAULT_GRID_POINTS, MIN_GRID_POINTS};
use crate::seed::stable_hash;

pub const DEFAULT_WINDOW_SIZE: usize = 80;
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_MIN_CASCADE: usize = 300;
pub const DEFAULT_QUIESCENCE: f64 = 0.05;
pub const DEFAULT_SMOOTH_WIDTH: usize = 5;

/// Log-spaced candidate bandwidths, four per decade from 1 s to 10⁶ s.
pub fn default_bandwidths() -> Vec<f64> {
    (0..=24).map(|i| 10f64.powf(i as f64 / 4.0)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub window_size: usize,
    pub k: usize,
    /// Cascades with fewer activations are left out.
    pub min_cascade: usize,
    pub alpha: f64,
    pub restarts: usize,
    pub seed: u64,
    pub strict_pseudocode: bool,
    pub absent_as_zero: bool,
    pub bandwidths: Vec<f64>,
    pub quiescence: f64,
    pub smooth_width: usize,
    pub grid_points: usize,
    pub steep_window: Option<usize>,
    pub inhib_window: Option<usize>,
    pub cascades: Option<PathBuf>,
    pub social: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            window_size: DEFAULT_WINDOW_SIZE,
            k: DEFAULT_K,
            min_cascade: DEFAULT_MIN_CASCADE,
            alpha: crate::stats::DEFAULT_ALPHA,
            restarts: 1,
            seed: 0,
            strict_pseudocode: false,
            absent_as_zero: true,
            bandwidths: default_bandwidths(),
            quiescence: DEFAULT_QUIESCENCE,
            smooth_width: DEFAULT_SMOOTH_WIDTH,
            grid_points: DEFAULT_GRID_POINTS,
            steep_window: None,
            inhib_window: None,
            cascades: None,
            social: None,
            output: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("bad value {value:?} for {key}"))),
    }
}

fn parse_window(key: &str, value: &str) -> Result<Option<usize>> {
    match value {
        "" | "none" | "auto" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl PipelineConfig {
    /// Sets one option by its command-line name; underscores and dashes are
    /// interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "window-size" => self.window_size = parse(&key, value)?,
            "k" => self.k = parse(&key, value)?,
            "min-cascade" => self.min_cascade = parse(&key, value)?,
            "alpha" => self.alpha = parse(&key, value)?,
            "restarts" => self.restarts = parse(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "strict-pseudocode" => self.strict_pseudocode = parse_bool(&key, value)?,
            "absent-as-zero" => self.absent_as_zero = parse_bool(&key, value)?,
            "bandwidths" => {
                self.bandwidths = value
                    .split(',')
                    .map(|v| parse(&key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "quiescence" => self.quiescence = parse(&key, value)?,
            "smooth-width" => self.smooth_width = parse(&key, value)?,
            "grid-points" => self.grid_points = parse(&key, value)?,
            "steep-window" => self.steep_window = parse_window(&key, value)?,
            "inhib-window" => self.inhib_window = parse_window(&key, value)?,
            "cascades" => self.cascades = Some(value.into()),
            "social" => self.social = Some(value.into()),
            "output" => self.output = Some(value.into()),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut config = PipelineConfig::default();
        config.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(config)
    }

    /// Key-value text that [`apply_text`](Self::apply_text) reads back to
    /// the same configuration.
    pub fn to_text(&self) -> String {
        let window = |w: Option<usize>| w.map_or("auto".to_string(), |w| w.to_string());
        let mut lines = vec![
            format!("window-size = {}", self.window_size),
            format!("k = {}", self.k),
            format!("min-cascade = {}", self.min_cascade),
            format!("alpha = {}", self.alpha),
            format!("restarts = {}", self.restarts),
            format!("seed = {}", self.seed),
            format!("strict-pseudocode = {}", self.strict_pseudocode),
            format!("absent-as-zero = {}", self.absent_as_zero),
            format!(
                "bandwidths = {}",
                self.bandwidths
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("quiescence = {}", self.quiescence),
            format!("smooth-width = {}", self.smooth_width),
            format!("grid-points = {}", self.grid_points),
            format!("steep-window = {}", window(self.steep_window)),
            format!("inhib-window = {}", window(self.inhib_window)),
        ];
        for (key, path) in [
            ("cascades", &self.cascades),
            ("social", &self.social),
            ("output", &self.output),
        ] {
            if let Some(p) = path {
                lines.push(format!("{key} = {}", p.display()));
            }
        }
        lines.join("\n") + "\n"
    }

    /// Hash of the analysis parameters; input and output paths are excluded.
    pub fn hash(&self) -> u64 {
        let analysis = PipelineConfig {
            cascades: None,
            social: None,
            output: None,
            ..self.clone()
        };
        stable_hash(&analysis.to_text())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(3..=crate::motif::MAX_ORDER).contains(&self.k) {
            return fail(format!(
                "k = {} outside 3..={}",
                self.k,
                crate::motif::MAX_ORDER
            ));
        }
        if self.window_size < self.k {
            return fail(format!(
                "window size {} smaller than k = {}",
                self.window_size, self.k
            ));
        }
        if self.min_cascade < self.window_size {
            return fail(format!(
                "minimum cascade size {} smaller than the window size {}",
                self.min_cascade, self.window_size
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if self.restarts == 0 {
            return fail("restarts must be at least 1".into());
        }
        if self.bandwidths.is_empty()
            || self.bandwidths.iter().any(|b| !(b.is_finite() && *b > 0.0))
        {
            return fail("bandwidths must be a non-empty list of positive numbers".into());
        }
        if !(self.quiescence > 0.0 && self.quiescence < 1.0) {
            return fail(format!("quiescence {} outside (0, 1)", self.quiescence));
        }
        if self.smooth_width == 0 {
            return fail("smooth width must be at least 1".into());
        }
        if self.grid_points < MIN_GRID_POINTS {
            return fail(format!(
                "grid points {} below {MIN_GRID_POINTS}",
                self.grid_points
            ));
        }
        Ok(())
    }
}
