use std::collections::BTreeMap;

use proptest::prelude::*;
use tailfit_core::dataset::{empirical_cdf, proportion_histogram, reduce_by_year, truncate_min, Event};
use tailfit_core::{CountSample, EventLog};

fn sample(pairs: &[(u64, u64)]) -> CountSample {
    CountSample::from_multiplicities(pairs.iter().copied(), "s").unwrap()
}

fn log(pairs: &[(&str, i32)]) -> EventLog {
    EventLog::new(pairs.iter().map(|&(a, y)| Event { author: a.into(), year: y }).collect(), "log").unwrap()
}

#[test]
fn truncation_examples() {
    let data = sample(&[(1, 10), (2, 5), (3, 2)]);
    let cut = truncate_min(&data, 3).unwrap();
    assert_eq!(cut.counts(), &BTreeMap::from([(3, 2)]));
    assert_eq!(cut.total(), 2);
    assert!(truncate_min(&sample(&[(1, 10)]), 2).is_err());
    assert!(truncate_min(&data, 0).is_err());
    assert_eq!(truncate_min(&data, 1).unwrap(), data);
}

#[test]
fn year_reduction_examples() {
    let events = log(&[("a", 1940), ("a", 1960), ("b", 1945)]);
    assert_eq!(reduce_by_year(&events, 1950).unwrap().counts(), &BTreeMap::from([(1, 2)]));
    assert!(reduce_by_year(&events, 1930).is_err());
    assert!(reduce_by_year(&events, 1899).is_err());
    let full = CountSample::from_author_counts(&events.author_counts(i32::MAX), "log").unwrap();
    assert_eq!(reduce_by_year(&events, 2050).unwrap(), full);
}

#[test]
fn event_logs_reject_blank_authors_and_wild_years() {
    assert!(EventLog::new(vec![Event { author: " ".into(), year: 2000 }], "x").is_err());
    assert!(EventLog::new(vec![Event { author: "a".into(), year: 1850 }], "x").is_err());
    let l = log(&[("a", 2001), ("a", 2001), ("b", 2003)]);
    assert_eq!((l.len(), l.num_authors(), l.year_span()), (3, 2, Some((2001, 2003))));
}

#[test]
fn proportion_examples() {
    let h = proportion_histogram(&sample(&[(1, 3), (2, 1)]));
    assert_eq!(h.bins, BTreeMap::from([(1, 0.75), (2, 0.25)]));
    assert!(h.normalized);
    assert_eq!(proportion_histogram(&sample(&[(5, 7)])).bins, BTreeMap::from([(5, 1.0)]));
}

#[test]
fn empirical_cdf_examples() {
    let s = empirical_cdf(&sample(&[(1, 3), (2, 1)]));
    assert_eq!((s.eval(0), s.eval(1), s.eval(2), s.eval(9)), (0.0, 0.75, 1.0, 1.0));
    let single = empirical_cdf(&sample(&[(5, 7)]));
    assert_eq!((single.eval(4), single.eval(5)), (0.0, 1.0));
    let gap = empirical_cdf(&sample(&[(2, 1), (10, 3)]));
    assert_eq!((gap.eval(1), gap.eval(2), gap.eval(9), gap.eval(10)), (0.0, 0.25, 0.25, 1.0));
}

#[test]
fn invalid_samples_are_rejected() {
    assert!(CountSample::from_multiplicities([(0, 1)], "s").is_err());
    assert!(CountSample::from_multiplicities([(3, 0)], "s").is_err());
    assert!(CountSample::from_multiplicities([(1, u64::MAX), (2, 1)], "s").is_err());
}

fn arb_sample() -> impl Strategy<Value = CountSample> {
    prop::collection::btree_map(1u64..500, 1u64..1000, 1..60)
        .prop_map(|m| CountSample::from_multiplicities(m, "p").unwrap())
}

proptest! {
    #[test]
    fn proportions_sum_to_one(data in arb_sample()) {
        let total: f64 = proportion_histogram(&data).bins.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_cumulated_proportions(data in arb_sample()) {
        let h = proportion_histogram(&data);
        let s = empirical_cdf(&data);
        let mut acc = 0.0;
        for (&v, &p) in &h.bins {
            acc += p;
            prop_assert!((s.eval(v) - acc).abs() < 1e-12);
            prop_assert!((s.eval(v) - s.eval(v - 1) - p).abs() < 1e-12);
        }
        prop_assert_eq!(s.eval(data.max_value()), 1.0);
    }

    #[test]
    fn truncation_is_idempotent(data in arb_sample(), n_min in 1u64..500) {
        if let Ok(once) = truncate_min(&data, n_min) {
            prop_assert_eq!(truncate_min(&once, n_min).unwrap(), once.clone());
            prop_assert!(once.min_value() >= n_min);
            let kept: u64 = data.iter().filter(|&(v, _)| v >= n_min).map(|(_, m)| m).sum();
            prop_assert_eq!(once.total(), kept);
        } else {
            prop_assert!(data.max_value() < n_min);
        }
    }

    #[test]
    fn reduction_at_last_year_matches_full_histogram(
        rows in prop::collection::vec((0u8..30, 1990i32..2020), 1..300)
    ) {
        let events: Vec<Event> = rows.iter().map(|&(a, y)| Event { author: format!("x{a}"), year: y }).collect();
        let l = EventLog::new(events, "p").unwrap();
        let (_, last) = l.year_span().unwrap();
        let full = CountSample::from_author_counts(&l.author_counts(i32::MAX), "p").unwrap();
        prop_assert_eq!(
            proportion_histogram(&reduce_by_year(&l, last).unwrap()),
            proportion_histogram(&full)
        );
        prop_assert_eq!(full.total() as usize, l.num_authors());
        prop_assert_eq!(full.values().sum::<u64>() as usize, l.len());
    }
}
