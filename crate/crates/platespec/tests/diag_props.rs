use platespec::diag::*;
use platespec::eigen::{log_grid, ExpansionFamily};
use platespec::params::Zone;
use platespec::rates::loglog_slope;
use platespec::SystemParams;
use proptest::prelude::*;

fn alpha_off_half() -> impl Strategy<Value = f64> {
    prop_oneof![0.0f64..0.49, 0.51f64..1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn step_identities(s in 1.0f64..3.0, a in alpha_off_half(), lr in -3.0f64..3.0) {
        let res = verify_step_identities(&SystemParams::undamped(s, a), 10f64.powf(lr)).unwrap();
        prop_assert_eq!(res.len(), 6);
        for (k, v) in res {
            prop_assert!(v <= 1e-12, "identity {k}: {v}");
        }
    }

    #[test]
    fn zone_diagonalizers_invertible(s in 1.0f64..3.0, a in alpha_off_half(), d: bool, lr in -3.0f64..-1.0) {
        let p = SystemParams::new(s, a, d, 1).unwrap();
        let small = zone_diagonalizer(&p, Zone::Small, 10f64.powf(lr)).unwrap();
        prop_assert!(small.value.det().norm() > 0.0);
        let large = zone_diagonalizer(&p, Zone::Large, 10f64.powf(-lr)).unwrap();
        prop_assert!(large.value.det().norm() > 0.0);
    }
}

#[test]
fn constant_factors_nonsingular() {
    for m in [StepMatrix::N1, StepMatrix::M1, StepMatrix::M4] {
        assert!(m.constant().det().norm() > 0.1);
    }
}

#[test]
fn similarity_residual_orders() {
    for damped in [false, true] {
        for (zone, a) in [
            (Zone::Small, 0.0),
            (Zone::Small, 0.25),
            (Zone::Small, 0.75),
            (Zone::Large, 0.25),
            (Zone::Large, 0.75),
            (Zone::Large, 1.0),
        ] {
            let p = SystemParams::new(1.0, a, damped, 1).unwrap();
            let rs = if zone == Zone::Small { log_grid(1e-3, 1e-1, 9) } else { log_grid(10.0, 1e3, 9) };
            let res: Vec<f64> = rs.iter().map(|&r| similarity_residual(&p, zone, r).unwrap()).collect();
            let want = ExpansionFamily::select(&p, zone).unwrap().order(&p).remainder_exponent;
            let got = loglog_slope(&rs, &res);
            assert!((got - want).abs() <= 0.2, "d={damped} {zone:?} a={a}: {got} vs {want}");
        }
    }
}

#[test]
fn identities_reject_half() {
    assert!(verify_step_identities(&SystemParams::undamped(1.0, 0.5), 0.1).is_err());
    assert!(verify_step_identities(&SystemParams::undamped(1.0, 0.2), 0.0).is_err());
}
