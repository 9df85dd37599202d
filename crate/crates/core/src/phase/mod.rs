//! Steep and inhibition phase detection from a self-exciting intensity.
//!
//! The intensity is `λ(t) = Σ_{t_i < t} exp(-(t - t_i)/θ) / θ`: an exponential
//! kernel of unit mass per past reshare and no background rate. The steep
//! time is the peak of the smoothed intensity; the inhibition time is the
//! first later local minimum after which the intensity stays below a fixed
//! fraction of that peak.

mod detect;
mod extrema;
mod intensity;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

pub use detect::{detect_phases, window_for_time, PhaseDetection};
pub use extrema::{find_extrema, moving_average, Extrema};
pub use intensity::{
    evaluate_intensity, fit_bandwidth, integrated_intensity, intensity, intensity_before_events,
    log_likelihood, LIKELIHOOD_FLOOR,
};

/// Intensity sampled on an evaluation grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensitySeries<F> {
    pub times: Vec<F>,
    pub values: Vec<F>,
}

impl<F: Real> IntensitySeries<F> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams<F> {
    /// Kernel decay time θ, in seconds.
    pub bandwidth: F,
    /// Number of evaluation points spanning `[0, T_C]`.
    pub grid_points: usize,
}

pub const MIN_GRID_POINTS: usize = 16;
pub const DEFAULT_GRID_POINTS: usize = 512;

impl<F: Real> KernelParams<F> {
    pub fn new(bandwidth: F, grid_points: usize) -> Result<Self> {
        let p = KernelParams {
            bandwidth,
            grid_points,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > F::zero() && self.bandwidth.is_finite()) {
            return Err(Error::param(format!(
                "bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::param(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                self.grid_points
            )));
        }
        Ok(())
    }
}
