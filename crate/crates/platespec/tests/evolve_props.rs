use platespec::evolve::*;
use platespec::mat3::{c, vec_norm, vec_sub};
use platespec::rates::geometric_times;
use platespec::*;
use proptest::prelude::*;

fn coarse() -> RadialQuadrature {
    RadialQuadrature::new(1e-3, 1e3, 24, 6, 1).unwrap().with_breakpoints(&[0.3, 10.0])
}

fn data() -> InitialData {
    InitialData::gaussian(1.0, default_weights(), 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn semigroup(s in 1.0f64..2.5, a in 0.0f64..1.0, d: bool, t in 0.0f64..50.0, dt in 0.0f64..50.0) {
        let p = SystemParams::new(s, a, d, 1).unwrap();
        let q = coarse();
        let ev = Evolution::new(&p, &data(), &q).unwrap();
        let two = ev.advance(&ev.state(t).unwrap(), dt).unwrap();
        let one = ev.state(t + dt).unwrap();
        for k in 0..q.len() {
            let n = vec_norm(&one.amplitudes[k]).max(1e-300);
            let e = vec_norm(&vec_sub(&two.amplitudes[k], &one.amplitudes[k]));
            prop_assert!(e <= 1e-9 * n.max(1e-200) || e < 1e-250, "node {k}: {e} of {n}");
        }
    }

    #[test]
    fn energy_is_nonincreasing(s in 1.0f64..2.5, a in 0.0f64..1.0, d: bool) {
        let p = SystemParams::new(s, a, d, 1).unwrap();
        let q = coarse();
        let ev = Evolution::new(&p, &data(), &q).unwrap();
        let mut prev = energy_norm(&ev.state(0.0).unwrap(), 0.0, None, &q).unwrap();
        for t in geometric_times(1e-2, 1e3, 4) {
            let cur = energy_norm(&ev.state(t).unwrap(), 0.0, None, &q).unwrap();
            prop_assert!(cur <= prev * (1.0 + 1e-9), "t={t}: {cur} > {prev}");
            prev = cur;
        }
    }

    #[test]
    fn conjugation_commutes(s in 1.0f64..2.5, a in 0.0f64..1.0, d: bool, lr in -3.0f64..3.0, t in 0.0f64..20.0) {
        let p = SystemParams::new(s, a, d, 1).unwrap();
        let prop = NodePropagator::new(&p, 10f64.powf(lr)).unwrap();
        let g = [c(0.3, -1.1), c(2.0, 0.4), c(-0.7, 0.2)];
        let lhs = prop.apply(t, &conjugate_swap(&g));
        let rhs = conjugate_swap(&prop.apply(t, &g));
        prop_assert!(vec_norm(&vec_sub(&lhs, &rhs)) <= 1e-10 * vec_norm(&rhs).max(1e-300));
    }
}

#[test]
fn symmetric_data_stays_symmetric() {
    let p = SystemParams::undamped(2.0, 0.3);
    let q = coarse();
    let w = [c(1.0, 2.0), c(1.0, -2.0), c(0.5, 0.0)];
    let ev = Evolution::new(&p, &InitialData::gaussian(1.0, w, 1).unwrap(), &q).unwrap();
    let st = ev.state(3.0).unwrap();
    for a in &st.amplitudes {
        assert!((a[1] - a[0].conj()).norm() <= 1e-12 * vec_norm(a).max(1e-300));
    }
}

#[test]
fn quadrature_refinement_is_stable() {
    let q = RadialQuadrature::default_for(1).unwrap();
    let qr = q.refined();
    let zp = ZonePartition::default();
    for p in [
        SystemParams::undamped(1.0, 0.0),
        SystemParams::undamped(2.0, 0.5),
        SystemParams::damped(1.0, 0.75),
        SystemParams::undamped(1.0, 1.0),
    ] {
        let e = Evolution::new(&p, &data(), &q).unwrap();
        let er = Evolution::new(&p, &data(), &qr).unwrap();
        for t in [0.0, 0.5, 3.0, 10.0, 100.0, 1e3, 1e4] {
            for z in [None, Some((Zone::Small, &zp))] {
                let a = sobolev_norm(&e.state(t).unwrap(), 0.0, z, &q).unwrap();
                let b = sobolev_norm(&er.state(t).unwrap(), 0.0, z, &qr).unwrap();
                assert!((a / b - 1.0).abs() < 1e-8, "{p:?} t={t}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn middle_zone_envelope() {
    let q = RadialQuadrature::new(0.3, 10.0, 12, 6, 1).unwrap();
    for p in [SystemParams::undamped(1.0, 0.0), SystemParams::damped(2.0, 0.75), SystemParams::undamped(1.5, 0.5)] {
        let rep = pointwise_envelope_check(&p, &data(), &geometric_times(1e-2, 1e3, 4), &q).unwrap();
        assert!(rep.c > 0.0 && rep.big_c.is_finite() && rep.stable, "{p:?} {rep:?}");
    }
}

#[test]
fn small_zone_norm_exponent() {
    let p = SystemParams::undamped(1.0, 0.0);
    let q = RadialQuadrature::default_for(1).unwrap();
    let zp = ZonePartition::default();
    let ev = Evolution::new(&p, &data(), &q).unwrap();
    let norm = |t: f64| sobolev_norm(&ev.state(t).unwrap(), 0.0, Some((Zone::Small, &zp)), &q).unwrap();
    let big_c = norm(1e3) * 1e3f64.powf(0.25);
    let ratio = norm(1e4) / (big_c * 1e4f64.powf(-0.25));
    assert!((0.5..=2.0).contains(&ratio), "{ratio}");
}

#[test]
fn zone_and_grid_errors() {
    let q = RadialQuadrature::new(1.0, 5.0, 4, 4, 1).unwrap();
    let mut q2 = q.clone();
    q2.nodes[0] *= 1.0001;
    let p = SystemParams::undamped(1.0, 0.0);
    let st = propagate(&p, &data(), 1.0, &q).unwrap();
    let zp = ZonePartition::new(1e-4, 1e-3).unwrap();
    assert!(matches!(sobolev_norm(&st, 0.0, Some((Zone::Small, &zp)), &q), Err(Error::EmptyZone)));
    assert!(sobolev_norm(&st, 0.0, None, &q2).is_err());
}
