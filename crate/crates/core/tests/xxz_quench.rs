//! Quench orchestration, de-staggering and reflection symmetry.

use lrspread::analysis::extract_front;
use lrspread::ed::{build_xxz, Propagator, PropagatorConfig, StateVector};
use lrspread::xxz::{destagger, destagger_field, destagger_magnitude_field, run_quench, Observable, QuenchConfig};
use lrspread::{Error, LatticeSpec};
use proptest::prelude::*;

mod common;
use common::*;

#[test]
fn quench_fields_match_dense_evolution() {
    let n = 8;
    let mut cfg = QuenchConfig::new(n, 1.5, 0.5);
    cfg.sample_stride = 40;
    let fields = run_quench(&cfg).unwrap();
    assert_eq!(fields.len(), 2);
    let (zz, pm) = (&fields[0], &fields[1]);
    assert_eq!(zz.observable, "zz_connected");
    assert_eq!(pm.observable, "pm_abs");
    assert_eq!(zz.distances, vec![1, 2, 3, 4]);
    assert_eq!(zz.times.len(), 6);

    let h = dense_xxz(n, 2.0, 1.0, 1.5);
    let psi0 = to_dvec(&StateVector::staggered(n).unwrap());
    let o = cfg.origin();
    for (ti, &t) in zz.times.iter().enumerate() {
        let v = dense_evolve(&h, &psi0, t);
        let z_o = dense_expectation(&embed(n, &[(o, 'Z')]), &v).re;
        for (di, &d) in zz.distances.iter().enumerate() {
            let j = o + d;
            let zz_ref = dense_expectation(&embed(n, &[(o, 'Z'), (j, 'Z')]), &v).re
                - z_o * dense_expectation(&embed(n, &[(j, 'Z')]), &v).re;
            let pm_ref = dense_expectation(&embed(n, &[(o, '+'), (j, '-')]), &v).norm();
            assert!((zz.get(ti, di) - zz_ref).abs() < 1e-8, "t={t} d={d}");
            assert!((pm.get(ti, di) - pm_ref).abs() < 1e-8, "t={t} d={d}");
        }
    }
}

#[test]
fn product_state_has_no_correlations_at_t0() {
    let cfg = QuenchConfig::new(6, 0.75, 0.05);
    for f in run_quench(&cfg).unwrap() {
        assert!(f.row(0).iter().all(|&v| v == 0.0));
        assert_eq!(f.metadata["destaggered"], false);
    }
}

#[test]
fn reflection_maps_right_correlators_onto_left_ones() {
    // Chain reflection sends the staggered state to its global spin flip,
    // which leaves both correlators invariant: C(o, o + d) = C(o + 1, o + 1 - d).
    let n = 10;
    let o = n / 2 - 1;
    let h = build_xxz(&LatticeSpec::chain(n).unwrap(), 2.0, 1.0, 0.75).unwrap().compile();
    let prop = Propagator::new(h, PropagatorConfig::default()).unwrap();
    let mut psi = StateVector::staggered(n).unwrap();
    for _ in 0..3 {
        psi = prop.evolve(&psi, 100).unwrap();
        for d in 1..=o {
            let right = psi.connected_zz(o, o + d).unwrap();
            let left = psi.connected_zz(o + 1, o + 1 - d).unwrap();
            assert!((right - left).abs() < 1e-9, "zz d={d}: {right} vs {left}");
            let right = psi.expectation_pm(o, o + d).unwrap().norm();
            let left = psi.expectation_pm(o + 1, o + 1 - d).unwrap().norm();
            assert!((right - left).abs() < 1e-9, "pm d={d}: {right} vs {left}");
        }
    }
}

#[test]
fn config_validation() {
    let odd = QuenchConfig::new(7, 1.0, 1.0);
    assert!(matches!(run_quench(&odd), Err(Error::Input(_))));
    let big = QuenchConfig::new(18, 1.0, 1.0);
    assert!(matches!(run_quench(&big), Err(Error::Input(_))));
    let mut none = QuenchConfig::new(6, 1.0, 1.0);
    none.observables.clear();
    assert!(matches!(run_quench(&none), Err(Error::Input(_))));
    let mut only_pm = QuenchConfig::new(4, 1.0, 0.05);
    only_pm.observables = vec![Observable::Pm];
    assert_eq!(run_quench(&only_pm).unwrap()[0].observable, "pm_abs");
}

#[test]
fn destaggered_fields_are_monotone_and_dominate() {
    let fields = run_quench(&QuenchConfig::new(8, 0.75, 0.5)).unwrap();
    for f in &fields {
        for g in [destagger_field(f), destagger_magnitude_field(f)] {
            for ti in 0..g.n_times() {
                let row = g.row(ti);
                assert!(row.windows(2).all(|w| w[0] >= w[1]));
            }
        }
        let m = destagger_magnitude_field(f);
        assert!(m.values().iter().zip(f.values()).all(|(a, b)| *a >= b.abs()));
        // a dominating field can only reach a threshold earlier
        let raw = extract_front(f, 1e-2).unwrap();
        let dst = extract_front(&m, 1e-2).unwrap();
        for (d, t) in dst.pairs() {
            if let Some(t_raw) = raw.arrival_at(d) {
                assert!(t <= t_raw + 1e-12);
            }
        }
    }
}

proptest! {
    #[test]
    fn destagger_is_idempotent(row in prop::collection::vec(-1.0f64..1.0, 0..40)) {
        let once = destagger(&row);
        prop_assert_eq!(destagger(&once), once.clone());
        prop_assert!(once.iter().zip(&row).all(|(a, b)| a >= b));
    }

    #[test]
    fn destagger_commutes_with_positive_scaling(
        row in prop::collection::vec(-1.0f64..1.0, 1..40),
        k in 0.01f64..100.0,
    ) {
        let scaled: Vec<f64> = row.iter().map(|v| v * k).collect();
        let lhs = destagger(&scaled);
        let rhs: Vec<f64> = destagger(&row).iter().map(|v| v * k).collect();
        prop_assert_eq!(lhs, rhs);
    }
}
