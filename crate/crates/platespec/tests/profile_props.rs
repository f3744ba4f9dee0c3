use platespec::evolve::*;
use platespec::profiles::*;
use platespec::rates::*;
use platespec::*;

#[test]
fn small_zone_improvements() {
    let q = RadialQuadrature::default_for(1).unwrap();
    let zp = ZonePartition::default();
    let times = geometric_times(1e3, 1e5, 8);
    for (a, d) in [(0.0, false), (0.75, false), (0.4, true), (0.75, true)] {
        let p = SystemParams::new(1.0, a, d, 1).unwrap();
        let data = InitialData::gaussian(1.0, default_weights(), 1).unwrap();
        let f = fit_improvement(&Refinement::new(&p, &data, &q, &zp).unwrap(), Zone::Small, 0.0, &times, (1e3, 1e5), &q).unwrap();
        let want = improvement_exponent(&p).unwrap();
        assert!(f.gain() <= -want + 0.1, "a={a} d={d}: {}", f.gain());
    }
}

#[test]
fn profile_solution_slopes() {
    let q = RadialQuadrature::default_for(1).unwrap();
    let zp = ZonePartition::default();
    let times = geometric_times(1e2, 1e4, 8);
    for (p, want) in [(SystemParams::undamped(1.0, 0.0), -0.25), (SystemParams::damped(1.0, 0.75), -1.0 / 3.0)] {
        let data = InitialData::gaussian(1.0, slow_mode_weights(&p).unwrap(), 1).unwrap();
        let v = ProfileVariant::for_zone(&p, Zone::Small).unwrap();
        let pe = ProfileEvolution::new(v, &p, &data, &q, &zp).unwrap();
        let vals: Vec<f64> = times.iter().map(|&t| sobolev_norm(&pe.state(t), 0.0, None, &q).unwrap()).collect();
        let f = fit_decay(&times, &vals, (1e2, 1e4)).unwrap();
        assert!((f.slope - want).abs() < 0.03, "{p:?}: {}", f.slope);
    }
}

#[test]
fn large_zone_regularity_gain() {
    let q = RadialQuadrature::default_for(1).unwrap();
    let zp = ZonePartition::default();
    for (s, a) in [(1.0, 0.0), (1.5, 0.05)] {
        let p = SystemParams::undamped(s, a);
        let beta = 2.0 * s * (1.0 - 3.0 * a);
        let t0 = 10f64.powf(30f64.powf(beta).log10().ceil());
        let window = (t0, 100.0 * t0);
        let times = geometric_times(window.0, window.1, 8);
        for tail in [1.5, 2.5] {
            let g = regularity_gain(&p, 0.0, tail, &times, window, &q, &zp).unwrap();
            assert!((g.difference_slope - g.shifted_solution_slope).abs() < 0.03, "s={s} a={a} tail={tail}: {g:?}");
            assert!(g.difference_slope < g.solution_slope);
        }
    }
}

#[test]
fn transforms_diagonalize_to_leading_order() {
    use platespec::symbol::assemble;
    for (id, p, r) in [
        (ProfileId::Rs1, SystemParams::undamped(1.0, 0.2), 1e-4),
        (ProfileId::Rs2, SystemParams::undamped(1.0, 0.8), 1e-4),
        (ProfileId::Rs3, SystemParams::damped(1.0, 0.2), 1e-4),
        (ProfileId::Rs4, SystemParams::damped(1.0, 0.8), 1e-4),
    ] {
        let l = profile_transform(id, &p, r).unwrap();
        let a = assemble(&p, r).unwrap();
        let m = l.inverse().unwrap() * a * l;
        let off = m.off_diagonal().max_abs() / m.max_abs();
        assert!(off < 0.05, "{id:?}: {off}");
    }
}
