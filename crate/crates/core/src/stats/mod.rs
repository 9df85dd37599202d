//! Welch two-sample tests of coverage between steep and inhibition windows.

mod special;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motif::MotifPattern;
use crate::num::Real;
use crate::percolation::CoverageResult;

pub use special::{ln_gamma, reg_inc_beta, student_t_cdf, student_t_two_sided};

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary<F> {
    pub n: usize,
    pub mean: F,
    /// Unbiased sample variance; zero for fewer than two values.
    pub variance: F,
}

impl<F: Real> SampleSummary<F> {
    pub fn of(sample: &[F]) -> Self {
        let n = sample.len();
        if n == 0 {
            return SampleSummary {
                n,
                mean: F::zero(),
                variance: F::zero(),
            };
        }
        let mean = sample.iter().copied().sum::<F>() / F::from_count(n);
        let variance = if n < 2 {
            F::zero()
        } else {
            sample.iter().map(|&x| (x - mean) * (x - mean)).sum::<F>() / F::from_count(n - 1)
        };
        SampleSummary { n, mean, variance }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult<F> {
    pub t: F,
    pub dof: F,
    /// Two-sided p-value.
    pub p: F,
    pub alpha: F,
    /// `p < alpha`.
    pub significant: bool,
    pub a: SampleSummary<F>,
    pub b: SampleSummary<F>,
}

/// Welch's unequal-variance two-sample t-test, two-sided.
///
/// When both samples have zero variance the statistic is 0 (p = 1) for equal
/// means and infinite (p = 0) otherwise, with `n_a + n_b - 2` degrees of freedom.
pub fn welch_t_test<F: Real>(a: &[F], b: &[F], alpha: F) -> Result<TTestResult<F>> {
    if !(alpha > F::zero() && alpha < F::one()) {
        return Err(Error::param(format!("alpha {alpha} outside (0, 1)")));
    }
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::UndersizedSample(a.len(), b.len()));
    }
    let (sa, sb) = (SampleSummary::of(a), SampleSummary::of(b));
    let va = sa.variance / F::from_count(sa.n);
    let vb = sb.variance / F::from_count(sb.n);
    let se2 = va + vb;
    let diff = sa.mean - sb.mean;

    let (t, dof, p) = if se2 == F::zero() {
        let dof = F::from_count(sa.n + sb.n - 2);
        if diff == F::zero() {
            (F::zero(), dof, F::one())
        } else {
            (diff.signum() * F::infinity(), dof, F::zero())
        }
    } else {
        let t = diff / se2.sqrt();
        let dof =
            se2 * se2 / (va * va / F::from_count(sa.n - 1) + vb * vb / F::from_count(sb.n - 1));
        (t, dof, student_t_two_sided(t, dof))
    };
    Ok(TTestResult {
        t,
        dof,
        p,
        alpha,
        significant: p < alpha,
        a: sa,
        b: sb,
    })
}

/// NC values of one cascade's steep and inhibition windows, by pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCoverage<F> {
    pub cascade_id: String,
    pub steep: BTreeMap<MotifPattern, F>,
    pub inhib: BTreeMap<MotifPattern, F>,
}

impl<F: Real> PhaseCoverage<F> {
    pub fn from_tables(
        cascade_id: impl Into<String>,
        steep: &BTreeMap<MotifPattern, CoverageResult<F>>,
        inhib: &BTreeMap<MotifPattern, CoverageResult<F>>,
    ) -> Self {
        let nc = |t: &BTreeMap<MotifPattern, CoverageResult<F>>| {
            t.iter().map(|(p, r)| (*p, r.nc)).collect()
        };
        PhaseCoverage {
            cascade_id: cascade_id.into(),
            steep: nc(steep),
            inhib: nc(inhib),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions<F> {
    pub alpha: F,
    /// A cascade whose window lacks the pattern contributes NC = 0; when
    /// false such cascades are left out of that phase's sample.
    pub absent_as_zero: bool,
}

impl<F: Real> Default for CompareOptions<F> {
    fn default() -> Self {
        CompareOptions {
            alpha: F::lit(DEFAULT_ALPHA),
            absent_as_zero: true,
        }
    }
}

/// Per-pattern comparison; `test` is `None` when a phase sample has fewer
/// than two values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternTest<F> {
    pub pattern: MotifPattern,
    pub n_steep: usize,
    pub n_inhib: usize,
    pub mean_steep: F,
    pub mean_inhib: F,
    pub test: Option<TTestResult<F>>,
    /// `min(1, p · m)` over the `m` patterns that were tested.
    pub p_bonferroni: Option<F>,
}

impl<F: Real> PatternTest<F> {
    pub fn skipped(&self) -> bool {
        self.test.is_none()
    }

    pub fn significant(&self) -> bool {
        self.test.is_some_and(|t| t.significant)
    }
}

/// One Welch test per pattern seen in any cascade, steep sample against
/// inhibition sample, in catalog order.
pub fn compare_phases<F: Real>(
    corpus: &[PhaseCoverage<F>],
    options: CompareOptions<F>,
) -> Result<Vec<PatternTest<F>>> {
    if !(options.alpha > F::zero() && options.alpha < F::one()) {
        return Err(Error::param(format!(
            "alpha {} outside (0, 1)",
            options.alpha
        )));
    }
    let patterns: BTreeSet<MotifPattern> = corpus
        .iter()
        .flat_map(|c| c.steep.keys().chain(c.inhib.keys()))
        .copied()
        .collect();
    let sample = |pattern: &MotifPattern,
                  pick: fn(&PhaseCoverage<F>) -> &BTreeMap<MotifPattern, F>|
     -> Vec<F> {
        corpus
            .iter()
            .filter_map(|c| match pick(c).get(pattern) {
                Some(&v) => Some(v),
                None if options.absent_as_zero => Some(F::zero()),
                None => None,
            })
            .collect()
    };

    let mut out: Vec<PatternTest<F>> = patterns
        .iter()
        .map(|p| {
            let a = sample(p, |c| &c.steep);
            let b = sample(p, |c| &c.inhib);
            let (sa, sb) = (SampleSummary::of(&a), SampleSummary::of(&b));
            let test = match welch_t_test(&a, &b, options.alpha) {
                Ok(t) => Some(t),
                Err(Error::UndersizedSample(..)) => None,
                Err(e) => return Err(e),
            };
            Ok(PatternTest {
                pattern: *p,
                n_steep: sa.n,
                n_inhib: sb.n,
                mean_steep: sa.mean,
                mean_inhib: sb.mean,
                test,
                p_bonferroni: None,
            })
        })
        .collect::<Result<_>>()?;

    let tested = F::from_count(out.iter().filter(|r| !r.skipped()).count());
    for r in &mut out {
        r.p_bonferroni = r.test.map(|t| (t.p * tested).min(F::one()));
    }
    Ok(out)
}
