use platespec::rates::*;
use platespec::SystemParams;
use proptest::prelude::*;

proptest! {
    #[test]
    fn fit_recovers_power_laws(e in 0.05f64..3.0, c0 in 0.1f64..10.0) {
        let times = geometric_times(1e2, 1e4, 8);
        let vals: Vec<f64> = times.iter().map(|t| c0 * t.powf(-e)).collect();
        let f = fit_decay(&times, &vals, (1e2, 1e4)).unwrap();
        prop_assert!((f.slope + e).abs() < 1e-10);
        prop_assert!((f.intercept - c0.ln()).abs() < 1e-8);
        prop_assert_eq!(f.n_points, 17);
    }

    #[test]
    fn window_shift_leaves_pure_power_law_unchanged(e in 0.05f64..3.0) {
        let times = geometric_times(1e2, 10f64.powf(4.5), 8);
        let vals: Vec<f64> = times.iter().map(|t| t.powf(-e)).collect();
        let a = fit_decay(&times, &vals, (1e2, 1e4)).unwrap();
        let b = fit_decay(&times, &vals, (10f64.powf(2.5), 10f64.powf(4.5))).unwrap();
        prop_assert!((a.slope - b.slope).abs() < 0.02);
    }

    #[test]
    fn moment_term_matches_small_frequency_exponent(s in 1.0f64..3.0, a in 0.0f64..1.0, d: bool, s0 in 0.0f64..2.0) {
        let p = SystemParams::new(s, a, d, 1).unwrap();
        let m = predicted_exponent(&p, s0, 0.0, 0.0, Term::MomentTerm).unwrap();
        prop_assert_eq!(m.value, small_frequency_exponent(&p, s0, 0.0));
        let w = predicted_exponent(&p, s0, 1.0, 0.0, Term::WeightedL1Term).unwrap();
        let h = predicted_exponent(&p, s0, 0.5, 0.0, Term::WeightedL1Term).unwrap();
        prop_assert!(w.value > m.value);
        prop_assert!(((w.value - m.value) - 2.0 * (h.value - m.value)).abs() < 1e-12 * w.value);
    }

    #[test]
    fn exponents_continuous_at_half(s in 1.0f64..3.0, d: bool) {
        let lo = small_frequency_exponent(&SystemParams::new(s, 0.5 - 1e-9, d, 1).unwrap(), 0.0, 0.0);
        let hi = small_frequency_exponent(&SystemParams::new(s, 0.5 + 1e-9, d, 1).unwrap(), 0.0, 0.0);
        prop_assert!((lo - hi).abs() < 1e-6);
    }
}

#[test]
fn fit_errors() {
    let t = geometric_times(1.0, 10.0, 4);
    let v = vec![1.0; t.len()];
    assert!(fit_decay(&t, &v, (1.0, 10.0)).is_err());
    let t = geometric_times(1.0, 100.0, 8);
    let mut v = vec![1.0; t.len()];
    v[3] = 0.0;
    assert!(fit_decay(&t, &v, (1.0, 100.0)).is_err());
}

#[test]
fn plate_moment_term() {
    let p = SystemParams::undamped(2.0, 0.5);
    assert_eq!(predicted_exponent(&p, 0.0, 0.0, 0.0, Term::MomentTerm).unwrap().value, 0.25);
}

#[test]
fn improvement_thresholds() {
    let u = |a| improvement_exponent(&SystemParams::undamped(1.0, a)).unwrap();
    let d = |a| improvement_exponent(&SystemParams::damped(1.0, a)).unwrap();
    assert_eq!(u(0.0), 0.5);
    assert!((u(0.75) - 0.2).abs() < 1e-15);
    assert!((d(0.75) - 1.0 / 3.0).abs() < 1e-15);
    assert!(u(0.5 - 1e-9) < 1e-8 && u(0.5 + 1e-9) < 1e-8);
}
