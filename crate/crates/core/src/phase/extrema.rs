use crate::error::{Error, Result};
use crate::num::Real;

/// Local extrema of a smoothed series as inclusive index runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrema<F> {
    pub smoothed: Vec<F>,
    pub maxima: Vec<(usize, usize)>,
    pub minima: Vec<(usize, usize)>,
}

/// Centred moving average of odd `width`; windows are truncated at the ends.
pub fn moving_average<F: Real>(values: &[F], width: usize) -> Vec<F> {
    let half = width / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(F::zero());
    for &v in values {
        let last = *prefix.last().expect("non-empty prefix");
        prefix.push(last + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            if width == 1 {
                values[i]
            } else {
                (prefix[hi] - prefix[lo]) / F::from_count(hi - lo)
            }
        })
        .collect()
}

/// Smooths `values` and returns the maximal equal-value runs that are strict
/// local maxima or minima. Runs touching either end are skipped, except that
/// an end run holding the global maximum is reported as a maximum.
pub fn find_extrema<F: Real>(values: &[F], smooth_width: usize) -> Result<Extrema<F>> {
    if smooth_width == 0 || smooth_width.is_multiple_of(2) {
        return Err(Error::param(format!(
            "smoothing width must be odd, got {smooth_width}"
        )));
    }
    if values.len() < smooth_width {
        return Err(Error::SeriesTooShort {
            len: values.len(),
            width: smooth_width,
        });
    }
    let smoothed = moving_average(values, smooth_width);

    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, &v) in smoothed.iter().enumerate() {
        match runs.last_mut() {
            Some((_, end)) if smoothed[*end] == v => *end = i,
            _ => runs.push((i, i)),
        }
    }
    let peak = smoothed.iter().copied().fold(F::neg_infinity(), F::max);
    let value = |r: (usize, usize)| smoothed[r.0];

    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    if runs.len() >= 2 {
        let last = runs.len() - 1;
        if value(runs[0]) == peak && value(runs[1]) < peak {
            maxima.push(runs[0]);
        }
        for w in runs.windows(3) {
            let (prev, cur, next) = (value(w[0]), value(w[1]), value(w[2]));
            if prev < cur && next < cur {
                maxima.push(w[1]);
            } else if prev > cur && next > cur {
                minima.push(w[1]);
            }
        }
        if value(runs[last]) == peak && value(runs[last - 1]) < peak {
            maxima.push(runs[last]);
        }
    }
    Ok(Extrema {
        smoothed,
        maxima,
        minima,
    })
}
