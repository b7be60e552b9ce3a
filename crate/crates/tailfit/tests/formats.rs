use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use tailfit::formats::{load_counts, load_events, write_value_mult, Layout};
use tailfit_core::{sample, ModelSpec, SeededRng};

#[test]
fn value_mult_round_trip_is_exact() {
    for (i, spec) in [
        ModelSpec::power_law(1.7, 1).unwrap(),
        ModelSpec::yule_simon(2.4, 3).unwrap(),
        ModelSpec::power_law_cutoff(2.0, 0.01, 2).unwrap(),
    ]
    .iter()
    .enumerate()
    {
        let data = sample(spec, &mut SeededRng::new(i as u64, 0), 20_000).unwrap();
        let mut buf = Vec::new();
        write_value_mult(&mut buf, &["a comment".to_string()], &data).unwrap();
        let back = load_counts(&buf[..], Layout::ValueMult, data.label()).unwrap();
        assert_eq!(back, data, "{spec}");
    }
}

#[test]
fn layout_examples() {
    let per_author = load_counts("a,3\nb,1\nc,3\n".as_bytes(), Layout::PerAuthor, "x").unwrap();
    assert_eq!(per_author.counts(), &BTreeMap::from([(1, 1), (3, 2)]));
    assert_eq!(per_author.total(), 3);
    let vm = load_counts("1,100\r\n2,50\r\n".as_bytes(), Layout::ValueMult, "x").unwrap();
    assert_eq!(vm.counts(), &BTreeMap::from([(1, 100), (2, 50)]));
    let events = load_events("a,2001\na,2001\nb,2003\n".as_bytes(), "x").unwrap();
    assert_eq!((events.len(), events.num_authors()), (3, 2));
    assert!(load_events("a,19x1\n".as_bytes(), "x").is_err());
    assert!(load_counts("".as_bytes(), Layout::PerAuthor, "x").is_err());
    assert!(load_counts("a,1\na,2\n".as_bytes(), Layout::PerAuthor, "x").is_err());
}

#[test]
fn large_event_file_keeps_every_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut body = String::new();
    for _ in 0..100_000 {
        let author = rng.next_u32() % 7000;
        let year = 1950 + (rng.next_u32() % 70) as i32;
        writeln!(body, "author-{author},{year}").unwrap();
    }
    let log = load_events(body.as_bytes(), "big").unwrap();
    assert_eq!(log.len(), body.lines().count());
    let per_author: u64 = log.author_counts(i32::MAX).values().sum();
    assert_eq!(per_author, 100_000);
}
