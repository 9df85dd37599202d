use serde::{Deserialize, Serialize};

use super::extrema::find_extrema;
use super::intensity::{event_times, intensity};
use super::KernelParams;
use crate::cascade::{Cascade, Window};
use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDetection<F> {
    pub t_steep: F,
    pub t_inhib: F,
    pub steep_window: usize,
    pub inhib_window: usize,
    /// No qualifying minimum was found (or only one window exists); the
    /// inhibition phase was placed in the last window.
    pub fallback: bool,
    /// Candidate steep intervals, as time ranges.
    pub maxima: Vec<(F, F)>,
    /// Candidate inhibition intervals, as time ranges.
    pub minima: Vec<(F, F)>,
}

/// Index of the last window starting at or before `t`; times past the last
/// window map to it and times in a gap map to the preceding window.
pub fn window_for_time<F: Real>(windows: &[Window], t: F) -> usize {
    let t = t.to_f64_lossy();
    windows.iter().rposition(|w| w.start_time <= t).unwrap_or(0)
}

/// Locates the steep and inhibition times of `cascade` and maps them to
/// `windows`.
///
/// The global maximum of the smoothed grid locates the steep peak; since the
/// intensity only jumps at events and decays between them, `t_steep` is then
/// refined to the event with the largest right-limit intensity among those
/// within the smoothing span of that grid point. `t_inhib` is the midpoint of the earliest candidate minimum after it from
/// which every remaining grid value is below `quiescence · λ(t_steep)`.
pub fn detect_phases<F: Real>(
    cascade: &Cascade,
    windows: &[Window],
    params: &KernelParams<F>,
    quiescence: F,
    smooth_width: usize,
) -> Result<PhaseDetection<F>> {
    if windows.is_empty() {
        return Err(Error::param("no windows to assign phases to"));
    }
    if !(quiescence > F::zero() && quiescence < F::one()) {
        return Err(Error::param(format!(
            "quiescence fraction {quiescence} outside (0, 1)"
        )));
    }
    let series = intensity(cascade, params)?;
    let ext = find_extrema(&series.values, smooth_width)?;
    let s = &ext.smoothed;
    let times = &series.times;

    let mut peak = 0;
    for (i, &v) in s.iter().enumerate() {
        if v > s[peak] {
            peak = i;
        }
    }
    let threshold = quiescence * s[peak];

    // quiet_from[i]: every value at index >= i is below the threshold
    let mut quiet_from = vec![false; s.len() + 1];
    quiet_from[s.len()] = true;
    for i in (0..s.len()).rev() {
        quiet_from[i] = quiet_from[i + 1] && s[i] < threshold;
    }
    let qualifying = ext
        .minima
        .iter()
        .find(|&&(start, _)| start > peak && quiet_from[start]);

    let half = smooth_width / 2 + 1;
    let lo = times[peak.saturating_sub(half)];
    let mut hi = times[(peak + half).min(times.len() - 1)];
    if let Some(&(start, _)) = qualifying {
        hi = hi.min(times[start]);
    }
    let t_steep =
        refine_peak(&event_times(cascade), params.bandwidth, lo, hi).unwrap_or(times[peak]);

    let last_window = windows.len() - 1;
    let steep_window = window_for_time(windows, t_steep);
    let (t_inhib, inhib_window, mut fallback) = match qualifying {
        Some(&(a, b)) => {
            let t = (times[a] + times[b]) / F::lit(2.0);
            (t, window_for_time(windows, t), false)
        }
        None => (*times.last().expect("non-empty grid"), last_window, true),
    };
    if windows.len() == 1 {
        fallback = true;
    }
    let span = |&(a, b): &(usize, usize)| (times[a], times[b]);
    Ok(PhaseDetection {
        t_steep,
        t_inhib,
        steep_window,
        inhib_window,
        fallback,
        maxima: ext.maxima.iter().map(span).collect(),
        minima: ext.minima.iter().map(span).collect(),
    })
}

/// Event time in `[lo, hi)` with the largest intensity just after it.
fn refine_peak<F: Real>(events: &[F], bandwidth: F, lo: F, hi: F) -> Option<F> {
    let jump = F::one() / bandwidth;
    let mut level = F::zero();
    let mut prev = F::zero();
    let mut best: Option<(F, F)> = None;
    for &t in events {
        level = level * (-(t - prev) / bandwidth).exp() + jump;
        prev = t;
        if t >= hi {
            break;
        }
        if t >= lo && best.is_none_or(|(_, v)| level > v) {
            best = Some((t, level));
        }
    }
    best.map(|(t, _)| t)
}
