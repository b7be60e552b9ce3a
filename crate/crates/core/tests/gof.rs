use tailfit_core::gof::GofSetup;
use tailfit_core::{gof_test, ks_distance, sample, CountSample, Error, Family, ModelSpec, SeededRng};

fn draws(spec: &ModelSpec, seed: u64, n: usize) -> CountSample {
    sample(spec, &mut SeededRng::new(seed, 0), n).unwrap()
}

#[test]
fn equal_inputs_give_identical_results() {
    let data = draws(&ModelSpec::power_law(2.2, 1).unwrap(), 1, 800);
    let a = gof_test(Family::PowerLaw, &data, 1, 100, 77).unwrap();
    let b = gof_test(Family::PowerLaw, &data, 1, 100, 77).unwrap();
    assert_eq!(a, b);
    let c = gof_test(Family::PowerLaw, &data, 1, 100, 78).unwrap();
    assert_ne!(a.replicate_ks, c.replicate_ks);
    assert_eq!(a.observed_ks, c.observed_ks);
}

#[test]
fn replicate_depends_only_on_seed_and_index() {
    let data = draws(&ModelSpec::yule_simon(2.5, 1).unwrap(), 2, 500);
    let full = gof_test(Family::YuleSimon, &data, 1, 30, 5).unwrap();
    let setup = GofSetup::new(Family::YuleSimon, &data, 1, 30, 5).unwrap();
    for i in [30u64, 1, 17] {
        let r = setup.replicate(i).unwrap();
        assert_eq!(r.ks, Some(full.replicate_ks[i as usize - 1]));
    }
}

#[test]
fn p_value_is_the_strict_exceedance_fraction() {
    let data = draws(&ModelSpec::power_law_cutoff(2.0, 0.02, 1).unwrap(), 3, 1000);
    for family in Family::GOF {
        let r = gof_test(family, &data, 1, 80, 9).unwrap();
        let strict = r.replicate_ks.iter().filter(|&&d| d > r.observed_ks).count();
        assert_eq!(r.p_value, strict as f64 / 80.0);
        assert!((0.0..=1.0).contains(&r.p_value));
        assert!(r.replicate_ks.iter().all(|&d| d >= 0.0));
        assert_eq!(r.observed_ks, ks_distance(&data, &r.fitted.spec).unwrap());
    }
}

#[test]
fn zero_replicates_is_a_domain_error() {
    let data = draws(&ModelSpec::power_law(2.5, 1).unwrap(), 4, 100);
    assert!(matches!(gof_test(Family::PowerLaw, &data, 1, 0, 1), Err(Error::Domain(_))));
}

#[test]
fn ks_distance_matches_dense_scan() {
    let spec = ModelSpec::power_law(2.5, 1).unwrap();
    for seed in 0..5 {
        let data = draws(&spec, 100 + seed, 200);
        let mut below = 0;
        let mut dense: f64 = 0.0;
        for k in 1..=data.max_value() {
            below += data.multiplicity(k);
            let s = below as f64 / 200.0;
            dense = dense.max((s - tailfit_core::distributions::cdf(&spec, k).unwrap()).abs());
        }
        assert!((ks_distance(&data, &spec).unwrap() - dense).abs() < 1e-12);
    }
}

#[test]
fn ks_distance_below_support_is_an_error() {
    let data = CountSample::from_values([1, 2, 3], "d").unwrap();
    assert!(ks_distance(&data, &ModelSpec::power_law(2.0, 2).unwrap()).is_err());
}

#[test]
fn extreme_outlier_does_not_raise_p_on_average() {
    let spec = ModelSpec::power_law(2.5, 1).unwrap();
    let (mut clean_sum, mut dirty_sum) = (0.0, 0.0);
    for trial in 0..20 {
        let data = draws(&spec, 500 + trial, 1000);
        let mut pairs: Vec<(u64, u64)> = data.iter().collect();
        pairs.push((10 * data.max_value(), 1));
        let dirty = CountSample::from_multiplicities(pairs, "dirty").unwrap();
        clean_sum += gof_test(Family::PowerLaw, &data, 1, 200, trial).unwrap().p_value;
        dirty_sum += gof_test(Family::PowerLaw, &dirty, 1, 200, trial).unwrap().p_value;
    }
    assert!(dirty_sum <= clean_sum, "mean p clean {} dirty {}", clean_sum / 20.0, dirty_sum / 20.0);
}

#[test]
fn misspecified_power_law_is_rejected() {
    let data = draws(&ModelSpec::power_law_cutoff(2.3, 0.06, 1).unwrap(), 6, 50_000);
    let r = gof_test(Family::PowerLaw, &data, 1, 100, 1).unwrap();
    assert!(r.rejected(), "p = {}", r.p_value);
    let ok = gof_test(Family::PowerLawCutoff, &data, 1, 100, 1).unwrap();
    assert!(!ok.rejected(), "p = {}", ok.p_value);
}
