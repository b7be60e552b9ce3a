#![no_std]

//! Discrete heavy-tailed count models and the statistics built on them.
//!
//! The crate covers four families on supports `{n_min, n_min + 1, ...}`
//! (power law, power law with exponential cutoff, Yule-Simon and a
//! geometric "exponential" reference), exact inverse-CDF samplers with
//! splittable seeded streams, maximum-likelihood fitting, a fully
//! parametric bootstrap Kolmogorov-Smirnov goodness-of-fit test, and the
//! bibliometric analyses layered on top: the power-law maximal count bound,
//! key-player detection, joint histograms with peak detection, and
//! preferential-attachment rates.
//!
//! Everything here is pure computation over in-memory data. File formats,
//! threading and the command line live in the `tailfit` crate.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod dataset;
pub mod distributions;
mod error;
pub mod fitting;
pub mod gof;
pub mod sampling;
pub mod special;

pub use dataset::{AuthorCounts, CountSample, EventLog, Histogram};
pub use distributions::{Family, ModelSpec};
pub use error::{Error, Result};
pub use fitting::{fit, loglik, FitResult};
pub use gof::{gof_test, ks_distance, GofResult, GofSetup};
pub use sampling::{sample, Sampler, SeededRng};
