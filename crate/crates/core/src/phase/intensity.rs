use super::{IntensitySeries, KernelParams};
use crate::cascade::Cascade;
use crate::error::{Error, Result};
use crate::num::Real;

/// Additive floor inside the log-likelihood; the first event has zero intensity.
pub const LIKELIHOOD_FLOOR: f64 = 1e-12;

/// `λ(t)` for each `t` in `at` (non-decreasing) given sorted event times.
///
/// One forward pass: the running sum `Σ exp(-(t_ref - t_i)/θ)` is decayed to
/// each new event before adding it, and to each evaluation time on output.
/// Events at exactly `t` are not counted at `t`.
pub fn evaluate_intensity<F: Real>(events: &[F], bandwidth: F, at: &[F]) -> Vec<F> {
    debug_assert!(events.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(at.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(at.len());
    let mut state = F::zero();
    let mut t_ref = F::zero();
    let mut next = 0;
    for &t in at {
        while next < events.len() && events[next] < t {
            let ti = events[next];
            state = if next == 0 {
                F::one()
            } else {
                state * (-(ti - t_ref) / bandwidth).exp() + F::one()
            };
            t_ref = ti;
            next += 1;
        }
        out.push(if next == 0 {
            F::zero()
        } else {
            state * (-(t - t_ref) / bandwidth).exp() / bandwidth
        });
    }
    out
}

/// `λ(t_i⁻)` for every event.
pub fn intensity_before_events<F: Real>(events: &[F], bandwidth: F) -> Vec<F> {
    evaluate_intensity(events, bandwidth, events)
}

/// Closed form of `∫_0^T λ(t) dt = Σ_{t_i < T} (1 - exp(-(T - t_i)/θ))`.
pub fn integrated_intensity<F: Real>(events: &[F], bandwidth: F, horizon: F) -> F {
    events
        .iter()
        .filter(|&&t| t < horizon)
        .map(|&t| F::one() - (-(horizon - t) / bandwidth).exp())
        .sum()
}

/// Point-process log-likelihood over `[0, T]` with `T` the last event time.
pub fn log_likelihood<F: Real>(events: &[F], bandwidth: F) -> F {
    let Some(&horizon) = events.last() else {
        return F::zero();
    };
    let floor = F::lit(LIKELIHOOD_FLOOR);
    let fit: F = intensity_before_events(events, bandwidth)
        .into_iter()
        .map(|l| (l + floor).ln())
        .sum();
    fit - integrated_intensity(events, bandwidth, horizon)
}

pub(crate) fn event_times<F: Real>(cascade: &Cascade) -> Vec<F> {
    cascade.events().iter().map(|e| F::lit(e.time)).collect()
}

/// Intensity of `cascade` on `grid_points` evenly spaced times over
/// `[0, T_C]`. A cascade whose events all share time 0 is evaluated over
/// `[0, θ]` instead.
pub fn intensity<F: Real>(
    cascade: &Cascade,
    params: &KernelParams<F>,
) -> Result<IntensitySeries<F>> {
    params.validate()?;
    let events = event_times::<F>(cascade);
    let duration = F::lit(cascade.duration());
    let end = if duration > F::zero() {
        duration
    } else {
        params.bandwidth
    };
    let last = F::from_count(params.grid_points - 1);
    let times: Vec<F> = (0..params.grid_points)
        .map(|g| end * F::from_count(g) / last)
        .collect();
    let values = evaluate_intensity(&events, params.bandwidth, &times);
    Ok(IntensitySeries { times, values })
}

/// Grid-search maximum-likelihood bandwidth. Ties go to the smaller θ;
/// cascades with at most one event get the grid median.
pub fn fit_bandwidth<F: Real>(cascade: &Cascade, candidates: &[F]) -> Result<F> {
    if candidates.is_empty() {
        return Err(Error::param("bandwidth grid is empty"));
    }
    if let Some(&bad) = candidates
        .iter()
        .find(|&&c| !(c > F::zero() && c.is_finite()))
    {
        return Err(Error::param(format!(
            "bandwidth candidate {bad} is not positive"
        )));
    }
    let mut grid = candidates.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite candidates"));
    let events = event_times::<F>(cascade);
    if events.len() <= 1 {
        return Ok(grid[(grid.len() - 1) / 2]);
    }
    let mut best = (grid[0], log_likelihood(&events, grid[0]));
    for &theta in &grid[1..] {
        let ll = log_likelihood(&events, theta);
        if ll > best.1 {
            best = (theta, ll);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::ingest_cascade;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn direct(events: &[f64], theta: f64, t: f64) -> f64 {
        events
            .iter()
            .filter(|&&ti| ti < t)
            .map(|&ti| (-(t - ti) / theta).exp() / theta)
            .sum()
    }

    fn cascade_at(times: &[f64]) -> Cascade {
        ingest_cascade(
            "c",
            times
                .iter()
                .enumerate()
                .map(|(i, &t)| ("r".to_string(), format!("u{i}"), t)),
        )
        .unwrap()
    }

    #[test]
    fn single_and_pair() {
        let v = evaluate_intensity(&[0.0], 1.0, &[1.0]);
        assert_relative_eq!(v[0], (-1.0f64).exp(), max_relative = 1e-15);
        let v = evaluate_intensity(&[0.0, 1.0], 1.0, &[2.0]);
        assert_relative_eq!(v[0], 0.503214724408055, max_relative = 1e-14);
        assert_eq!(
            evaluate_intensity::<f64>(&[], 3.0, &[0.0, 5.0]),
            vec![0.0, 0.0]
        );
        let v32 = evaluate_intensity(&[0.0f32, 1.0], 1.0, &[2.0]);
        assert!((v32[0] - 0.503_214_7).abs() < 1e-6);
    }

    #[test]
    fn strict_inequality_at_event_times() {
        let v = intensity_before_events(&[0.0, 0.0, 1.0], 1.0);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], 0.0);
        assert_relative_eq!(v[2], 2.0 * (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn grid_on_cascade() {
        let c = cascade_at(&[0.0]);
        let s = intensity(&c, &KernelParams::new(1.0, 16).unwrap()).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!(*s.times.last().unwrap(), 1.0);
        assert_relative_eq!(
            *s.values.last().unwrap(),
            0.36787944117144233,
            max_relative = 1e-14
        );
        assert!(KernelParams::new(0.0, 512).is_err());
        assert!(KernelParams::new(1.0, 15).is_err());
        assert!(KernelParams::new(f64::NAN, 512).is_err());
    }

    #[test]
    fn clustered_bandwidth_matches_quadrature_oracle() {
        // five clusters of ten events one second apart, each cluster starting 1009 s after the previous;
        // a quadrature evaluation of the likelihood over θ = 0.1·2^(i/2) peaks at i = 9
        let mut times = Vec::new();
        for c in 0..5 {
            for j in 0..10 {
                times.push((c * 1009 + j) as f64);
            }
        }
        let grid: Vec<f64> = (0..27).map(|i| 0.1 * 2f64.powf(i as f64 / 2.0)).collect();
        let theta = fit_bandwidth(&cascade_at(&times), &grid).unwrap();
        assert_relative_eq!(theta, grid[9], max_relative = 1e-12);
        assert!(theta > 0.5 && theta < 5.0);
    }

    #[test]
    fn likelihood_matches_numerical_integral() {
        let times = [0.0, 0.4, 1.1, 1.3, 4.0, 4.2, 9.0];
        for theta in [0.3, 1.0, 2.5] {
            // Simpson on each inter-event segment of the direct sum
            let mut integral = 0.0;
            for w in times.windows(2) {
                let (a, b) = (w[0], w[1]);
                let m = 2000;
                let h = (b - a) / m as f64;
                let mut s = direct(&times, theta, a + 1e-12) + direct(&times, theta, b - 1e-12);
                for i in 1..m {
                    let x = a + i as f64 * h;
                    s += direct(&times, theta, x) * if i % 2 == 1 { 4.0 } else { 2.0 };
                }
                integral += s * h / 3.0;
            }
            let fit: f64 = times
                .iter()
                .map(|&t| (direct(&times, theta, t) + 1e-12).ln())
                .sum();
            assert_relative_eq!(
                log_likelihood(&times, theta),
                fit - integral,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn degenerate_fits() {
        let one = cascade_at(&[3.0]);
        assert_eq!(fit_bandwidth(&one, &[8.0, 1.0, 4.0, 2.0]).unwrap(), 2.0);
        assert_eq!(fit_bandwidth(&one, &[8.0, 1.0, 4.0]).unwrap(), 4.0);
        let many = cascade_at(&[0.0, 1.0, 2.0, 5.0]);
        assert_eq!(fit_bandwidth(&many, &[7.5]).unwrap(), 7.5);
        assert!(fit_bandwidth::<f64>(&many, &[]).is_err());
        assert!(fit_bandwidth(&many, &[1.0, -2.0]).is_err());
    }

    proptest! {
        #[test]
        fn recursion_equals_direct_sum(
            mut events in prop::collection::vec(0.0f64..100.0, 0..200),
            theta in 0.05f64..20.0,
        ) {
            events.sort_by(f64::total_cmp);
            let grid: Vec<f64> = (0..64).map(|g| g as f64 * 110.0 / 63.0).collect();
            let fast = evaluate_intensity(&events, theta, &grid);
            for (&t, &v) in grid.iter().zip(&fast) {
                let d = direct(&events, theta, t);
                prop_assert!(v >= 0.0);
                prop_assert!((v - d).abs() <= 1e-9 * d.abs().max(1e-300), "t={t} fast={v} direct={d}");
            }
        }

        #[test]
        fn mass_is_closed_form(
            mut events in prop::collection::vec(0.0f64..50.0, 1..40),
            theta in 0.5f64..5.0,
        ) {
            events.sort_by(f64::total_cmp);
            let horizon = 60.0;
            let m = 60_000;
            let grid: Vec<f64> = (0..=m).map(|g| g as f64 * horizon / m as f64).collect();
            let v = evaluate_intensity(&events, theta, &grid);
            let h = horizon / m as f64;
            let trap: f64 = v.windows(2).map(|w| (w[0] + w[1]) * h / 2.0).sum();
            let exact = integrated_intensity(&events, theta, horizon);
            prop_assert!(exact <= events.len() as f64);
            // jumps of height 1/θ make the trapezoid rule first order in h
            prop_assert!((trap - exact).abs() <= events.len() as f64 * h / theta, "{trap} vs {exact}");
        }
    }
}
