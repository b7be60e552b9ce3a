//! Analyses built on fitted models and raw corpora.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::dataset::{AuthorCounts, CountSample, EventLog, Histogram};
use crate::distributions::{log_normalizer, ModelSpec, Params};
use crate::error::{Error, Result};
use crate::fitting::FitResult;

/// `n_max = (N_J C_1)^{1/α}`: the count at which the fitted power law
/// predicts a single author.
pub fn n_max(n_authors: u64, spec: &ModelSpec) -> Result<f64> {
    let Params::PowerLaw { alpha } = spec.params() else {
        return Err(Error::domain(format!("n_max needs a power-law model, got {spec}")));
    };
    if n_authors == 0 {
        return Err(Error::domain("n_max needs at least one author"));
    }
    // ln(N_J C_1) = ln N_J - ln Z
    let log_scale = libm::log(n_authors as f64) - log_normalizer(spec)?;
    Ok(libm::exp(log_scale / alpha))
}

/// `(scale)^{1/α}` for a given `scale = N_J C_1`.
pub fn n_max_from_scale(scale: f64, alpha: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("N_J * C_1 must be positive, got {scale}")));
    }
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("power-law exponent must exceed 1, got {alpha}")));
    }
    Ok(libm::pow(scale, 1.0 / alpha))
}

/// Counts that exceed the power-law bound.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPlayerReport {
    pub n_max: f64,
    /// `(count, multiplicity)` for every count strictly above `n_max`.
    pub exceeders: Vec<(u64, u64)>,
    pub fitted_alpha: f64,
    pub n_authors: u64,
}

/// Key players under a power-law fit of `data`.
pub fn key_players(data: &CountSample, fit: &FitResult) -> Result<KeyPlayerReport> {
    let bound = n_max(data.total(), &fit.spec)?;
    let alpha = fit.spec.param_vec()[0];
    Ok(key_players_above(data, bound, alpha))
}

/// Key players against an explicit bound.
pub fn key_players_above(data: &CountSample, bound: f64, alpha: f64) -> KeyPlayerReport {
    let exceeders = data.iter().filter(|&(v, _)| v as f64 > bound).collect();
    KeyPlayerReport { n_max: bound, exceeders, fitted_alpha: alpha, n_authors: data.total() }
}

/// Shared authors binned by their counts in two corpora.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Histogram2D {
    pub bins: BTreeMap<(u64, u64), u64>,
}

impl Histogram2D {
    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    /// The `k` fullest cells, largest first; ties in coordinate order.
    pub fn top_cells(&self, k: usize) -> Vec<((u64, u64), u64)> {
        let mut cells: Vec<_> = self.bins.iter().map(|(&c, &n)| (c, n)).collect();
        cells.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        cells.truncate(k);
        cells
    }
}

/// Joint histogram over authors present in both corpora.
pub fn joint_histogram(a: &AuthorCounts, b: &AuthorCounts) -> Histogram2D {
    let mut h = Histogram2D::default();
    for (author, &count_a) in a {
        if let Some(&count_b) = b.get(author) {
            *h.bins.entry((count_a, count_b)).or_insert(0) += 1;
        }
    }
    h
}

pub const DEFAULT_PEAK_WINDOW: usize = 10;
pub const DEFAULT_PEAK_PROMINENCE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub value: u64,
    pub height: f64,
}

/// Local maxima of a 1-D histogram.
///
/// Bins are laid out densely from the smallest to the largest value, with
/// missing values at height zero. A bin is a peak when it is the strict
/// maximum of the bins within `±window`, its height exceeds
/// `min_prominence` times the median of that window, and it is not the
/// first or last bin of the histogram (edges of a monotone profile are not
/// peaks). Sorted by height, highest first.
pub fn detect_peaks(h: &Histogram, window: usize, min_prominence: f64) -> Vec<Peak> {
    let (Some(&lo), Some(&hi)) = (h.bins.keys().next(), h.bins.keys().next_back()) else {
        return Vec::new();
    };
    let len = (hi - lo + 1) as usize;
    let mut heights = alloc::vec![0.0f64; len];
    for (&v, &x) in &h.bins {
        heights[(v - lo) as usize] = x;
    }
    let mut peaks = Vec::new();
    let mut scratch = Vec::with_capacity(2 * window + 1);
    for i in 1..len.saturating_sub(1) {
        let (from, to) = (i.saturating_sub(window), (i + window).min(len - 1));
        let centre = heights[i];
        if (from..=to).any(|j| j != i && heights[j] >= centre) {
            continue;
        }
        scratch.clear();
        scratch.extend_from_slice(&heights[from..=to]);
        scratch.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        let m = scratch.len();
        let median = if m % 2 == 1 { scratch[m / 2] } else { 0.5 * (scratch[m / 2 - 1] + scratch[m / 2]) };
        if centre > min_prominence * median {
            peaks.push(Peak { value: lo + i as u64, height: centre });
        }
    }
    peaks.sort_by(|a, b| {
        b.height
            .partial_cmp(&a.height)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.value.cmp(&b.value))
    });
    peaks
}

/// Which authors enter `N_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ActivityFilter {
    /// Only authors who publish at least once in year `t`.
    #[default]
    ActiveOnly,
    /// Every author with `k` prior publications, publishing or not.
    All,
}

/// `m_k(t) / N_k(t)` for one `(k, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    /// Publications up to the end of year `t - 1`.
    pub k: u64,
    pub year: i32,
    pub n_k: u64,
    pub m_k: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateAnalysis {
    pub points: Vec<RatePoint>,
    /// Pearson correlation of `(k, rate)` over all points; `NaN` when
    /// undefined (see `pearson_defined`).
    pub pearson_r: f64,
    pub pearson_defined: bool,
}

/// Publication rate as a function of prior count, pooled over `years`.
pub fn pref_attach_rates(log: &EventLog, years: RangeInclusive<i32>, filter: ActivityFilter) -> Result<RateAnalysis> {
    if years.is_empty() {
        return Err(Error::domain(format!(
            "empty year range {}:{}",
            years.start(),
            years.end()
        )));
    }
    let (first, last) = (*years.start(), *years.end());
    let mut by_year: BTreeMap<i32, BTreeMap<&str, u64>> = BTreeMap::new();
    for e in log.events() {
        *by_year.entry(e.year).or_default().entry(e.author.as_str()).or_insert(0) += 1;
    }
    // k per author at the start of `first`.
    let mut prior: BTreeMap<&str, u64> = BTreeMap::new();
    for per_author in by_year.range(..first).map(|(_, m)| m) {
        for (&a, &c) in per_author {
            *prior.entry(a).or_insert(0) += c;
        }
    }
    let empty = BTreeMap::new();
    let mut points = Vec::new();
    for year in first..=last {
        let this_year = by_year.get(&year).unwrap_or(&empty);
        let mut groups: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
        match filter {
            ActivityFilter::ActiveOnly => {
                for (a, &c) in this_year {
                    if let Some(&k) = prior.get(a) {
                        let g = groups.entry(k).or_default();
                        g.0 += 1;
                        g.1 += c;
                    }
                }
            }
            ActivityFilter::All => {
                for (a, &k) in &prior {
                    let g = groups.entry(k).or_default();
                    g.0 += 1;
                    g.1 += this_year.get(a).copied().unwrap_or(0);
                }
            }
        }
        points.extend(groups.into_iter().map(|(k, (n_k, m_k))| RatePoint {
            k,
            year,
            n_k,
            m_k,
            rate: m_k as f64 / n_k as f64,
        }));
        for (&a, &c) in this_year {
            *prior.entry(a).or_insert(0) += c;
        }
    }
    if points.is_empty() {
        return Err(Error::domain(format!(
            "no author in '{}' has publications before a year in {first}:{last} in which they publish",
            log.label()
        )));
    }
    let ks: Vec<f64> = points.iter().map(|p| p.k as f64).collect();
    let rates: Vec<f64> = points.iter().map(|p| p.rate).collect();
    let r = pearson(&ks, &rates);
    Ok(RateAnalysis { points, pearson_r: r.unwrap_or(f64::NAN), pearson_defined: r.is_some() })
}

/// Pearson correlation; `None` with fewer than two points or zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Event;
    use alloc::string::{String, ToString};
    use alloc::vec;

    #[test]
    fn n_max_algebra() {
        assert!((n_max_from_scale(1000.0, 2.0).unwrap() - libm::sqrt(1000.0)).abs() < 1e-12);
        assert!(n_max_from_scale(1000.0, 1.0).is_err());
        assert!(ModelSpec::power_law(1.0, 1).is_err());
        let ys = ModelSpec::yule_simon(3.0, 1).unwrap();
        assert!(n_max(100, &ys).is_err());
    }

    #[test]
    fn n_max_through_normalizer() {
        // N_J C_1 = 1000 with α = 2 on n >= 1 means N_J = 1000 ζ(2).
        let spec = ModelSpec::power_law(2.0, 1).unwrap();
        let zeta2 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
        let nj = 1000.0 * zeta2;
        let via_spec = libm::exp((libm::log(nj) - log_normalizer(&spec).unwrap()) / 2.0);
        assert!((via_spec - 31.622_776_601_683_793).abs() < 1e-9);
    }

    #[test]
    fn key_player_boundary_is_strict() {
        let bound = 31.6;
        let d = CountSample::from_values(vec![1, 2, 10], "d").unwrap();
        assert!(key_players_above(&d, bound, 2.0).exceeders.is_empty());
        let d = CountSample::from_values(vec![32], "d").unwrap();
        assert_eq!(key_players_above(&d, bound, 2.0).exceeders, vec![(32, 1)]);
        let d = CountSample::from_values(vec![32], "d").unwrap();
        assert!(key_players_above(&d, 32.0, 2.0).exceeders.is_empty());
    }

    fn authors(pairs: &[(&str, u64)]) -> AuthorCounts {
        pairs.iter().map(|&(a, c)| (a.to_string(), c)).collect()
    }

    #[test]
    fn joint_histogram_basics() {
        let a = authors(&[("x", 1), ("y", 2)]);
        let b = authors(&[("z", 4)]);
        assert_eq!(joint_histogram(&a, &b).total(), 0);
        let h = joint_histogram(&authors(&[("a", 4)]), &authors(&[("a", 7)]));
        assert_eq!(h.bins.into_iter().collect::<Vec<_>>(), vec![((4, 7), 1)]);
    }

    fn hist(values: &[(u64, f64)]) -> Histogram {
        Histogram { bins: values.iter().copied().collect(), normalized: false }
    }

    #[test]
    fn no_peaks_in_monotone_profile() {
        let h = hist(&(1..=200).map(|v| (v, 1e5 / (v * v) as f64)).collect::<Vec<_>>());
        assert!(detect_peaks(&h, 10, 3.0).is_empty());
    }

    #[test]
    fn single_spike() {
        let mut v: Vec<(u64, f64)> = (1..=100).map(|x| (x, 2.0)).collect();
        v[49].1 = 40.0;
        let peaks = detect_peaks(&hist(&v), 10, 3.0);
        assert_eq!(peaks, vec![Peak { value: 50, height: 40.0 }]);
    }

    #[test]
    fn empty_histogram_has_no_peaks() {
        assert!(detect_peaks(&hist(&[]), 10, 3.0).is_empty());
    }

    fn log_of(events: &[(&str, i32)]) -> EventLog {
        EventLog::new(
            events.iter().map(|&(a, y)| Event { author: String::from(a), year: y }).collect(),
            "toy",
        )
        .unwrap()
    }

    #[test]
    fn one_author_one_paper_per_year() {
        let log = log_of(&(2000..2010).map(|y| ("solo", y)).collect::<Vec<_>>());
        let r = pref_attach_rates(&log, 2001..=2009, ActivityFilter::ActiveOnly).unwrap();
        assert_eq!(r.points.len(), 9);
        assert!(r.points.iter().all(|p| p.rate == 1.0 && p.n_k == 1));
        assert!(!r.pearson_defined && r.pearson_r.is_nan());
    }

    #[test]
    fn exact_linear_process() {
        // Author i starts with i papers in 2000 and each year publishes
        // exactly as many papers as it already has.
        let mut events = Vec::new();
        let names: Vec<String> = (1..=6).map(|i| alloc::format!("a{i}")).collect();
        for (i, name) in names.iter().enumerate() {
            let mut k = i as u64 + 1;
            for _ in 0..k {
                events.push((name.as_str(), 2000));
            }
            for year in 2001..=2003 {
                for _ in 0..k {
                    events.push((name.as_str(), year));
                }
                k *= 2;
            }
        }
        let r = pref_attach_rates(&log_of(&events), 2001..=2003, ActivityFilter::ActiveOnly).unwrap();
        assert!(r.points.iter().all(|p| p.rate == p.k as f64));
        assert!(r.pearson_defined);
        assert!((r.pearson_r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn activity_filter_changes_denominator() {
        let log = log_of(&[("a", 2000), ("b", 2000), ("a", 2001)]);
        let active = pref_attach_rates(&log, 2001..=2001, ActivityFilter::ActiveOnly).unwrap();
        assert_eq!(active.points, vec![RatePoint { k: 1, year: 2001, n_k: 1, m_k: 1, rate: 1.0 }]);
        let all = pref_attach_rates(&log, 2001..=2001, ActivityFilter::All).unwrap();
        assert_eq!(all.points, vec![RatePoint { k: 1, year: 2001, n_k: 2, m_k: 1, rate: 0.5 }]);
    }

    #[test]
    fn empty_range_is_an_error() {
        let log = log_of(&[("a", 2000), ("a", 2001)]);
        #[allow(clippy::reversed_empty_ranges)]
        let r = pref_attach_rates(&log, 2005..=2001, ActivityFilter::ActiveOnly);
        assert!(matches!(r, Err(Error::Domain(_))));
        assert!(pref_attach_rates(&log, 1990..=1995, ActivityFilter::ActiveOnly).is_err());
    }
}
