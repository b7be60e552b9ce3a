//! Per-author count data and its reductions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Earliest and latest years accepted in event logs.
pub const YEAR_RANGE: (i32, i32) = (1900, 2100);

/// Author id → number of publications.
pub type AuthorCounts = BTreeMap<String, u64>;

/// The multiset `{n_i}` of per-author counts for one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSample {
    counts: BTreeMap<u64, u64>,
    total: u64,
    label: String,
}

impl CountSample {
    /// From `(value, multiplicity)` pairs; repeated values accumulate and
    /// zero multiplicities are dropped.
    pub fn from_multiplicities(
        pairs: impl IntoIterator<Item = (u64, u64)>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total = 0u64;
        for (value, mult) in pairs {
            if value == 0 {
                return Err(Error::domain("counts must be positive"));
            }
            if mult == 0 {
                continue;
            }
            total = total.checked_add(mult).ok_or_else(|| Error::domain("total multiplicity overflows u64"))?;
            *counts.entry(value).or_insert(0) += mult;
        }
        if total == 0 {
            return Err(Error::domain("a count sample needs at least one author"));
        }
        Ok(CountSample { counts, total, label: label.into() })
    }

    /// From one count per author.
    pub fn from_values(values: impl IntoIterator<Item = u64>, label: impl Into<String>) -> Result<Self> {
        Self::from_multiplicities(values.into_iter().map(|v| (v, 1)), label)
    }

    pub fn from_author_counts(authors: &AuthorCounts, label: impl Into<String>) -> Result<Self> {
        Self::from_values(authors.values().copied(), label)
    }

    /// `N_J`, the number of authors.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Smallest count present.
    pub fn min_value(&self) -> u64 {
        *self.counts.keys().next().expect("nonempty by construction")
    }

    pub fn max_value(&self) -> u64 {
        *self.counts.keys().next_back().expect("nonempty by construction")
    }

    pub fn multiplicity(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// `(value, multiplicity)` in increasing value order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &m)| (v, m))
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Every count, expanded, in increasing order.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.iter().flat_map(|(v, m)| core::iter::repeat(v).take(m as usize))
    }
}

/// Drops every count below `n_min`.
pub fn truncate_min(data: &CountSample, n_min: u64) -> Result<CountSample> {
    if n_min < 1 {
        return Err(Error::domain("n_min must be at least 1"));
    }
    CountSample::from_multiplicities(data.counts.range(n_min..).map(|(&v, &m)| (v, m)), data.label.clone())
        .map_err(|_| Error::domain(format!("no counts of at least {n_min} remain in '{}'", data.label)))
}

/// One publication by one author.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Event {
    pub author: String,
    pub year: i32,
}

/// Time-stamped publication events of one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<Event>,
    label: String,
}

impl EventLog {
    pub fn new(events: Vec<Event>, label: impl Into<String>) -> Result<Self> {
        for e in &events {
            if e.author.trim().is_empty() {
                return Err(Error::domain("anonymous events (blank author id) are not accepted"));
            }
            if e.year < YEAR_RANGE.0 || e.year > YEAR_RANGE.1 {
                return Err(Error::domain(format!(
                    "year {} outside [{}, {}]",
                    e.year, YEAR_RANGE.0, YEAR_RANGE.1
                )));
            }
        }
        Ok(EventLog { events, label: label.into() })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_authors(&self) -> usize {
        self.author_counts(i32::MAX).len()
    }

    /// Publications per author over events up to and including `cutoff_year`.
    pub fn author_counts(&self, cutoff_year: i32) -> AuthorCounts {
        let mut out = AuthorCounts::new();
        for e in self.events.iter().filter(|e| e.year <= cutoff_year) {
            *out.entry(e.author.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn year_span(&self) -> Option<(i32, i32)> {
        let min = self.events.iter().map(|e| e.year).min()?;
        let max = self.events.iter().map(|e| e.year).max()?;
        Some((min, max))
    }
}

/// Per-author counts over the events published up to `cutoff_year`.
pub fn reduce_by_year(log: &EventLog, cutoff_year: i32) -> Result<CountSample> {
    if cutoff_year < YEAR_RANGE.0 {
        return Err(Error::domain(format!("cutoff year {cutoff_year} precedes {}", YEAR_RANGE.0)));
    }
    let authors = log.author_counts(cutoff_year);
    CountSample::from_author_counts(&authors, log.label.clone())
        .map_err(|_| Error::domain(format!("no events up to {cutoff_year} in '{}'", log.label)))
}

/// Value → proportion (or raw count) histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: BTreeMap<u64, f64>,
    pub normalized: bool,
}

impl Histogram {
    /// Raw multiplicities of a sample.
    pub fn from_counts(data: &CountSample) -> Self {
        Histogram { bins: data.iter().map(|(v, m)| (v, m as f64)).collect(), normalized: false }
    }

    pub fn get(&self, value: u64) -> f64 {
        self.bins.get(&value).copied().unwrap_or(0.0)
    }
}

/// `a_J(n) = |{i : n_i = n}| / N_J`.
pub fn proportion_histogram(data: &CountSample) -> Histogram {
    let n = data.total() as f64;
    Histogram { bins: data.iter().map(|(v, m)| (v, m as f64 / n)).collect(), normalized: true }
}

/// Right-continuous empirical CDF `S(k) = |{x <= k}| / N`.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    steps: Vec<(u64, f64)>,
}

impl EmpiricalCdf {
    pub fn eval(&self, k: u64) -> f64 {
        let idx = self.steps.partition_point(|&(v, _)| v <= k);
        if idx == 0 {
            0.0
        } else {
            self.steps[idx - 1].1
        }
    }

    /// `(value, S(value))` at each distinct value.
    pub fn steps(&self) -> &[(u64, f64)] {
        &self.steps
    }
}

pub fn empirical_cdf(data: &CountSample) -> EmpiricalCdf {
    let n = data.total() as f64;
    let mut running = 0u64;
    let mut steps: Vec<(u64, f64)> = data
        .iter()
        .map(|(v, m)| {
            running += m;
            (v, running as f64 / n)
        })
        .collect();
    // Exact 1 at the top regardless of rounding.
    if let Some(last) = steps.last_mut() {
        last.1 = 1.0;
    }
    EmpiricalCdf { steps }
}
