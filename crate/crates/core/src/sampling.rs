//! Exact inverse-CDF sampling with splittable seeded streams.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dataset::CountSample;
use crate::distributions::{Density, ModelSpec};
use crate::error::{Error, Result};
use crate::special::CompensatedSum;

/// Largest value a draw can take. Only models with astronomically heavy
/// tails (exponents just above 1) put mass past it.
pub const MAX_DRAW: u64 = 1 << 53;

/// Upper bound on the cumulative table length.
const TABLE_CAP: usize = 1 << 18;

/// A ChaCha8 stream identified by `(seed, stream_id)`.
///
/// Streams with the same seed and different ids are disjoint keystreams of
/// the same cipher key, so replicate `i` of a bootstrap can own stream `i`
/// no matter which thread runs it.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        SeededRng { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// A uniform draw `u` on the open interval (0, 1) together with `1 - u`,
    /// both taken from the same 53-bit integer so neither loses precision.
    pub fn uniform_pair(&mut self) -> (f64, f64) {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        let k = self.next_u64() >> 11;
        let u = (k as f64 + 0.5) * SCALE;
        let v = (((1u64 << 53) - 1 - k) as f64 + 0.5) * SCALE;
        (u, v)
    }

    pub fn uniform(&mut self) -> f64 {
        self.uniform_pair().0
    }
}

/// Inverse-CDF sampler for one model.
///
/// Holds the cumulative distribution over a prefix of the support; draws
/// that land beyond the prefix are inverted through the survival function
/// by exponential search and bisection. The sampler is immutable after
/// construction and can be shared between threads.
#[derive(Debug, Clone)]
pub struct Sampler {
    density: Density,
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let density = Density::new(spec)?;
        let n_min = spec.n_min();
        let mut cumulative = Vec::new();
        let mut acc = CompensatedSum::default();
        let mut n = n_min;
        while cumulative.len() < TABLE_CAP {
            acc.add(density.pmf(n));
            let c = acc.value().min(1.0);
            cumulative.push(c);
            if 1.0 - c < 1e-15 || n >= MAX_DRAW {
                break;
            }
            n += 1;
        }
        Ok(Sampler { density, cumulative })
    }

    pub fn spec(&self) -> &ModelSpec {
        self.density.spec()
    }

    /// One draw.
    pub fn draw(&self, rng: &mut SeededRng) -> Result<u64> {
        let (u, v) = rng.uniform_pair();
        self.invert(u, v)
    }

    /// Smallest `n` with `cdf(n) >= u`; `v = 1 - u`.
    pub(crate) fn invert(&self, u: f64, v: f64) -> Result<u64> {
        let n_min = self.spec().n_min();
        let last = *self.cumulative.last().expect("table has at least one entry");
        if u <= last {
            let idx = self.cumulative.partition_point(|&c| c < u);
            return Ok(n_min + idx as u64);
        }
        // cdf(n) >= u  <=>  ln sf(n) <= ln v
        let target = libm::log(v);
        let reached = |n: u64| -> Result<bool> { Ok(self.density.log_sf(n)? <= target) };
        let mut lo = n_min + self.cumulative.len() as u64 - 1;
        let mut step = 1u64;
        let mut hi;
        loop {
            hi = lo.saturating_add(step).min(MAX_DRAW);
            if reached(hi)? {
                break;
            }
            if hi == MAX_DRAW {
                return Ok(MAX_DRAW);
            }
            lo = hi;
            step = step.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if reached(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `count` independent draws aggregated into a sample.
    pub fn sample_counts(&self, rng: &mut SeededRng, count: usize, label: impl Into<String>) -> Result<CountSample> {
        if count == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        let n_min = self.spec().n_min();
        let mut dense = vec![0u64; self.cumulative.len()];
        let mut beyond: BTreeMap<u64, u64> = BTreeMap::new();
        for _ in 0..count {
            let n = self.draw(rng)?;
            let idx = (n - n_min) as usize;
            if idx < dense.len() {
                dense[idx] += 1;
            } else {
                *beyond.entry(n).or_insert(0) += 1;
            }
        }
        let mut counts = beyond;
        for (idx, &m) in dense.iter().enumerate() {
            if m > 0 {
                counts.insert(n_min + idx as u64, m);
            }
        }
        CountSample::from_multiplicities(counts, label)
    }

    /// Draws in generation order.
    pub fn draws(&self, rng: &mut SeededRng, count: usize) -> Result<Vec<u64>> {
        (0..count).map(|_| self.draw(rng)).collect()
    }
}

/// `count` independent draws from `spec` using the given stream.
pub fn sample(spec: &ModelSpec, rng: &mut SeededRng, count: usize) -> Result<CountSample> {
    Sampler::new(spec)?.sample_counts(rng, count, "synthetic")
}
