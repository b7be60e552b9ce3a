//! Parametric-bootstrap Kolmogorov-Smirnov goodness-of-fit.
//!
//! The observed sample is fitted, `R` synthetic samples of the same size are
//! drawn from the fit, and each synthetic sample is *refitted* before its
//! KS distance is taken against its own refit. The p-value is the fraction
//! of replicates strictly farther from their model than the data is from
//! its model.
//!
//! [`GofSetup`] splits the test into independent per-replicate tasks so a
//! caller can run them on any number of threads: replicate `i` always uses
//! stream `i` of the seed, and [`GofSetup::finish`] orders outcomes by index.

use alloc::format;
use alloc::vec::Vec;

use crate::dataset::CountSample;
use crate::distributions::{Density, Family, ModelSpec};
use crate::error::{Error, Result};
use crate::fitting::{fit, FitResult};
use crate::sampling::{Sampler, SeededRng};

pub const DEFAULT_REPLICATES: usize = 5000;
/// A fit is rejected when `p` falls below this level.
pub const REJECTION_LEVEL: f64 = 0.05;
/// Stream offset for the single retry of a replicate whose refit failed.
pub const RETRY_STREAM_OFFSET: u64 = 1 << 32;
/// Largest tolerated fraction of failed replicates.
pub const MAX_FAILED_FRACTION: f64 = 0.01;

/// `max_k |S(k) - P(k)|` between the empirical CDF of `data` and `spec`.
///
/// Both CDFs are step functions on the integers; between consecutive
/// distinct data values `S` is constant and `P` is monotone, so the
/// maximum is attained at a data value `v` or at `v - 1`.
pub fn ks_distance(data: &CountSample, spec: &ModelSpec) -> Result<f64> {
    if data.min_value() < spec.n_min() {
        return Err(Error::domain(format!(
            "data value {} lies below the support start {}",
            data.min_value(),
            spec.n_min()
        )));
    }
    let density = Density::new(spec)?;
    ks_with(data, &density)
}

fn ks_with(data: &CountSample, density: &Density) -> Result<f64> {
    let n = data.total() as f64;
    let mut below = 0u64;
    let mut worst: f64 = 0.0;
    for (value, mult) in data.iter() {
        let p_at = density.cdf(value)?;
        let p_before = (p_at - density.pmf(value)).max(0.0);
        let s_before = below as f64 / n;
        below += mult;
        let s_at = below as f64 / n;
        worst = worst.max((s_before - p_before).abs()).max((s_at - p_at).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GofResult {
    pub family: Family,
    pub observed_ks: f64,
    /// KS distance of replicate `i` at position `i - 1`; `NaN` marks a
    /// replicate that failed to refit twice (listed in `failed`).
    pub replicate_ks: Vec<f64>,
    pub failed: Vec<u64>,
    /// Fraction of successful replicates with a KS distance strictly above
    /// `observed_ks`.
    pub p_value: f64,
    pub replicates: usize,
    pub seed: u64,
    pub fitted: FitResult,
}

impl GofResult {
    pub fn rejected(&self) -> bool {
        self.p_value < REJECTION_LEVEL
    }

    /// Count of replicates that exceeded the observed distance.
    pub fn exceedances(&self) -> usize {
        self.replicate_ks.iter().filter(|&&d| d > self.observed_ks).count()
    }

    /// Number of replicates that contributed to the p-value.
    pub fn effective_replicates(&self) -> usize {
        self.replicates - self.failed.len()
    }
}

/// Result of one bootstrap replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateOutcome {
    pub index: u64,
    /// `None` when both attempts failed to refit.
    pub ks: Option<f64>,
    pub attempts: u8,
}

/// The fitted observation plus everything replicates share.
#[derive(Debug, Clone)]
pub struct GofSetup {
    family: Family,
    n_min: u64,
    replicates: usize,
    seed: u64,
    size: usize,
    fitted: FitResult,
    observed_ks: f64,
    sampler: Sampler,
}

impl GofSetup {
    pub fn new(family: Family, data: &CountSample, n_min: u64, replicates: usize, seed: u64) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::domain("the bootstrap needs at least one replicate"));
        }
        let fitted = fit(family, data, n_min)?;
        let observed_ks = ks_distance(data, &fitted.spec)?;
        let sampler = Sampler::new(&fitted.spec)?;
        Ok(GofSetup {
            family,
            n_min,
            replicates,
            seed,
            size: data.total() as usize,
            fitted,
            observed_ks,
            sampler,
        })
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn fitted(&self) -> &FitResult {
        &self.fitted
    }

    pub fn observed_ks(&self) -> f64 {
        self.observed_ks
    }

    /// Runs replicate `index` (1-based). Depends only on `(seed, index)`.
    pub fn replicate(&self, index: u64) -> Result<ReplicateOutcome> {
        for (attempt, stream) in [index, index + RETRY_STREAM_OFFSET].into_iter().enumerate() {
            let mut rng = SeededRng::new(self.seed, stream);
            let synthetic = self.sampler.sample_counts(&mut rng, self.size, "replicate")?;
            match fit(self.family, &synthetic, self.n_min) {
                Ok(refit) if refit.converged => {
                    let ks = ks_distance(&synthetic, &refit.spec)?;
                    return Ok(ReplicateOutcome { index, ks: Some(ks), attempts: attempt as u8 + 1 });
                }
                _ => continue,
            }
        }
        Ok(ReplicateOutcome { index, ks: None, attempts: 2 })
    }

    /// Combines replicate outcomes, given in any order.
    pub fn finish(self, mut outcomes: Vec<ReplicateOutcome>) -> Result<GofResult> {
        outcomes.sort_by_key(|o| o.index);
        let complete = outcomes.len() == self.replicates
            && outcomes.iter().enumerate().all(|(i, o)| o.index == i as u64 + 1);
        if !complete {
            return Err(Error::domain(format!(
                "expected outcomes for replicates 1..={}, got {}",
                self.replicates,
                outcomes.len()
            )));
        }
        let failed: Vec<u64> = outcomes.iter().filter(|o| o.ks.is_none()).map(|o| o.index).collect();
        if failed.len() as f64 > MAX_FAILED_FRACTION * self.replicates as f64 {
            return Err(Error::ReplicateFailures { failed: failed.len(), replicates: self.replicates });
        }
        let replicate_ks: Vec<f64> = outcomes.iter().map(|o| o.ks.unwrap_or(f64::NAN)).collect();
        let effective = self.replicates - failed.len();
        let exceed = replicate_ks.iter().filter(|&&d| d > self.observed_ks).count();
        let p_value = if effective == 0 { 0.0 } else { exceed as f64 / effective as f64 };
        Ok(GofResult {
            family: self.family,
            observed_ks: self.observed_ks,
            replicate_ks,
            failed,
            p_value,
            replicates: self.replicates,
            seed: self.seed,
            fitted: self.fitted,
        })
    }
}

/// Sequential bootstrap test; see [`GofSetup`] for the parallel building blocks.
pub fn gof_test(family: Family, data: &CountSample, n_min: u64, replicates: usize, seed: u64) -> Result<GofResult> {
    let setup = GofSetup::new(family, data, n_min, replicates, seed)?;
    let outcomes = (1..=replicates as u64).map(|i| setup.replicate(i)).collect::<Result<Vec<_>>>()?;
    setup.finish(outcomes)
}
