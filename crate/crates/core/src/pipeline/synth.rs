use std::collections::HashSet;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::io::{group_cascades, write_events_csv, write_social, RawEvent};
use crate::cascade::{build_social_network, Cascade, SocialNetwork};
use crate::error::{Error, Result};
use crate::seed;

/// Inter-event timing of generated cascades.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurstProfile {
    /// Mean inter-event time, in seconds, before the burst window.
    pub base_interval: f64,
    /// Event rate in the burst window relative to the base rate.
    pub burst_ratio: f64,
    pub burst_window: usize,
    /// After the burst the mean inter-event time starts at `base_interval`
    /// and grows by a factor `exp(tail_decay)` per window.
    pub tail_decay: f64,
}

impl Default for BurstProfile {
    fn default() -> Self {
        BurstProfile {
            base_interval: 60.0,
            burst_ratio: 10.0,
            burst_window: 1,
            tail_decay: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_cascades: usize,
    /// Activations per cascade, original poster included.
    pub nodes_per_cascade: usize,
    pub window_size: usize,
    pub burst: BurstProfile,
    /// Fraction of a window's candidate pairs planted as historical edges,
    /// for windows up to and including the burst window.
    pub steep_density: f64,
    /// The same fraction for windows after the burst.
    pub inhib_density: f64,
    /// Probability that an activation reshares from an earlier user of its
    /// own window rather than from a user of an earlier window. The first
    /// user of a window always reshares from an earlier window, and window 0
    /// is a single tree.
    pub local_parent: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_cascades: 200,
            nodes_per_cascade: 320,
            window_size: 80,
            burst: BurstProfile::default(),
            steep_density: 0.01,
            inhib_density: 0.03,
            local_parent: 0.9,
            seed: 0,
        }
    }
}

/// What was planted in one window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedWindow {
    pub cascade_id: String,
    pub window: usize,
    pub density: f64,
    pub reshare_edges: usize,
    pub candidate_pairs: usize,
    pub planted: usize,
    /// Planted pairs whose endpoints share a reshare neighbour.
    pub triad_closing: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticCorpus {
    pub events: Vec<RawEvent>,
    pub social: Vec<(String, String)>,
    pub planted: Vec<PlantedWindow>,
}

impl SyntheticCorpus {
    pub fn cascades(&self) -> Vec<Cascade> {
        group_cascades(self.events.clone()).0
    }

    pub fn social_network(&self) -> SocialNetwork {
        build_social_network(self.social.iter().map(|(u, v)| (u.as_str(), v.as_str())))
    }

    /// Writes `cascades.csv` and `social.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let events = dir.join("cascades.csv");
        let social = dir.join("social.txt");
        write_events_csv(BufWriter::new(File::create(&events)?), &self.events)?;
        write_social(BufWriter::new(File::create(&social)?), &self.social)?;
        Ok((events, social))
    }
}

fn clamp_density(name: &str, d: f64) -> Result<f64> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::param(format!(
            "{name} density {d} must be a non-negative number"
        )));
    }
    if d > 1.0 {
        log::warn!("{name} density {d} exceeds the complete graph; clamped to 1");
        return Ok(1.0);
    }
    Ok(d)
}

fn exponential(rng: &mut impl Rng, mean: f64) -> f64 {
    -mean * (1.0 - rng.gen::<f64>()).ln()
}

/// A corpus of random recursive reshare trees with a timed burst and
/// window-local historical edges.
///
/// Each activation reshares from a uniformly chosen earlier user of its own
/// window with probability `local_parent`, otherwise from a uniformly chosen
/// user of an earlier window. Within every complete window
/// the candidate pairs are the non-adjacent pairs of users joined by
/// in-window reshares; `density` of them are planted, pairs at reshare
/// distance two first. Every cascade draws from its own stream derived from
/// the seed and the cascade id.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    let w = spec.window_size;
    if spec.n_cascades == 0 || w < 2 {
        return Err(Error::param(
            "need at least one cascade and a window size of at least 2",
        ));
    }
    if spec.nodes_per_cascade < 2 * w {
        return Err(Error::param(format!(
            "{} nodes per cascade is fewer than two windows of {w}",
            spec.nodes_per_cascade
        )));
    }
    let b = &spec.burst;
    if !(b.base_interval > 0.0 && b.burst_ratio > 0.0 && b.tail_decay.is_finite()) {
        return Err(Error::param(
            "burst profile needs positive interval and ratio",
        ));
    }
    let full_windows = spec.nodes_per_cascade / w;
    if b.burst_window >= full_windows {
        return Err(Error::param(format!(
            "burst window {} beyond the {full_windows} complete windows",
            b.burst_window
        )));
    }
    if !(0.0..=1.0).contains(&spec.local_parent) {
        return Err(Error::param("local parent probability outside [0, 1]"));
    }
    let steep = clamp_density("steep", spec.steep_density)?;
    let inhib = clamp_density("inhibition", spec.inhib_density)?;

    let width = spec.n_cascades.saturating_sub(1).to_string().len().max(4);
    let mut corpus = SyntheticCorpus {
        events: Vec::new(),
        social: Vec::new(),
        planted: Vec::new(),
    };
    for c in 0..spec.n_cascades {
        let id = format!("c{c:0width$}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(spec.seed, seed::stable_hash(&id)));
        let n = spec.nodes_per_cascade;
        let user = |j: usize| format!("{id}_u{j}");

        let mut parent = vec![0usize; n];
        let mut time = 0.0;
        let tail_start = (b.burst_window + 1) * w;
        for j in 1..n {
            let lo = j / w * w;
            parent[j] = if j > lo && (lo == 0 || rng.gen_bool(spec.local_parent)) {
                rng.gen_range(lo..j)
            } else {
                rng.gen_range(0..lo)
            };
            let mean = match (j / w).cmp(&b.burst_window) {
                std::cmp::Ordering::Less => b.base_interval,
                std::cmp::Ordering::Equal => b.base_interval / b.burst_ratio,
                std::cmp::Ordering::Greater => {
                    b.base_interval * (b.tail_decay * (j - tail_start) as f64 / w as f64).exp()
                }
            };
            time += exponential(&mut rng, mean);
            corpus.events.push(RawEvent {
                cascade_id: id.clone(),
                source: user(parent[j]),
                target: user(j),
                time,
            });
        }

        for q in 0..full_windows {
            let density = if q <= b.burst_window { steep } else { inhib };
            let lo = q * w;
            let local = |j: usize| j - lo;
            let mut adj = vec![Vec::new(); w];
            let mut comp: Vec<usize> = (0..w).collect();
            let mut reshare_edges = 0;
            for j in lo + 1..lo + w {
                if parent[j] >= lo {
                    let (p, v) = (local(parent[j]), local(j));
                    adj[p].push(v);
                    adj[v].push(p);
                    comp[v] = comp[p];
                    reshare_edges += 1;
                }
            }
            let mut triads = Vec::new();
            for nbrs in &adj {
                for (i, &x) in nbrs.iter().enumerate() {
                    for &y in &nbrs[i + 1..] {
                        triads.push((x.min(y), x.max(y)));
                    }
                }
            }
            let near: HashSet<(usize, usize)> = triads.iter().copied().collect();
            let mut others = Vec::new();
            for x in 0..w {
                for y in x + 1..w {
                    if comp[x] == comp[y] && !adj[x].contains(&y) && !near.contains(&(x, y)) {
                        others.push((x, y));
                    }
                }
            }
            let candidates = triads.len() + others.len();
            let target = (density * candidates as f64).round() as usize;
            triads.shuffle(&mut rng);
            others.shuffle(&mut rng);
            let closing = target.min(triads.len());
            for &(x, y) in triads
                .iter()
                .take(closing)
                .chain(others.iter().take(target - closing))
            {
                corpus.social.push((user(lo + x), user(lo + y)));
            }
            corpus.planted.push(PlantedWindow {
                cascade_id: id.clone(),
                window: q,
                density,
                reshare_edges,
                candidate_pairs: candidates,
                planted: target,
                triad_closing: closing,
            });
        }
    }
    Ok(corpus)
}
