use platespec::apps::*;
use platespec::evolve::*;
use platespec::rates::*;
use platespec::*;

fn small_zone_slope(name: &str) -> f64 {
    let pr = preset(name).unwrap();
    let q = RadialQuadrature::default_for(1).unwrap();
    let zp = ZonePartition::default();
    let times = geometric_times(1e2, 1e4, 8);
    let ev = Evolution::new(&pr.params, &pr.data, &q).unwrap();
    let v: Vec<f64> =
        times.iter().map(|&t| sobolev_norm(&ev.state(t).unwrap(), 0.0, Some((Zone::Small, &zp)), &q).unwrap()).collect();
    fit_decay(&times, &v, (1e2, 1e4)).unwrap().slope
}

#[test]
fn dmgt_rate() {
    assert!((small_zone_slope("dmgt") + 0.25).abs() < 0.03);
}

#[test]
fn damping_does_not_change_the_plate_rate() {
    let (a, b) = (small_zone_slope("plate"), small_zone_slope("plate_damped"));
    assert!((a + 0.25).abs() < 0.03);
    assert!((a - b).abs() < 0.02, "{a} vs {b}");
}

#[test]
fn mgt_energy_conserved() {
    let q = RadialQuadrature::default_for(1).unwrap();
    let times: Vec<f64> = (0..=100).map(f64::from).collect();
    assert!(mgt_energy_drift(&MgtData::gaussian(), &times, &q).unwrap() <= 1e-9);
}

#[test]
fn mgt_initial_energy_closed_form() {
    // E(0) = (1/2) int r^2 exp(-r^2) * 2 dr = sqrt(pi) / 4
    let q = RadialQuadrature::default_for(1).unwrap();
    let e0 = mgt_energy(&MgtData::gaussian(), 0.0, &q).unwrap();
    assert!((e0 / (std::f64::consts::PI.sqrt() / 4.0) - 1.0).abs() < 1e-10);
}
