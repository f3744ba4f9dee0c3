//! Named presets, the damped MGT data map and the conserved MGT energy.

use std::sync::Arc;

use crate::eigen::EigenBranches;
use crate::error::{Error, Result};
use crate::evolve::{default_weights, InitialData, NodePropagator};
use crate::mat3::{c, vec_norm, ComplexMat3, Vec3, C64, I, ONE, ZERO};
use crate::par::{self, pairwise_sum};
use crate::params::SystemParams;
use crate::quadrature::RadialQuadrature;

pub const PRESET_NAMES: [&str; 3] = ["plate", "plate_damped", "dmgt"];

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub params: SystemParams,
    pub data: InitialData,
    pub notes: &'static str,
}

pub fn preset(name: &str) -> Result<Preset> {
    let data = InitialData::gaussian(1.0, default_weights(), 1)?;
    let (name, params, notes) = match name {
        "plate" => ("plate", SystemParams::undamped(2.0, 0.5), "thermoelastic plate"),
        "plate_damped" => ("plate_damped", SystemParams::damped(2.0, 0.5), "thermoelastic plate with structural damping"),
        "dmgt" => ("dmgt", SystemParams::undamped(1.0, 0.0), "MGT equation with friction, as the alpha = 0, sigma = 1 system"),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(Preset { name, params, data, notes })
}

pub type RadialFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// `(u0_hat, u1_hat, u2_hat)` for a third-order equation.
#[derive(Clone)]
pub struct MgtData {
    pub u0: RadialFn,
    pub u1: RadialFn,
    pub u2: RadialFn,
}

impl std::fmt::Debug for MgtData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("MgtData { .. }")
    }
}

impl MgtData {
    pub fn new(
        u0: impl Fn(f64) -> C64 + Send + Sync + 'static,
        u1: impl Fn(f64) -> C64 + Send + Sync + 'static,
        u2: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self { u0: Arc::new(u0), u1: Arc::new(u1), u2: Arc::new(u2) }
    }

    /// `u0_hat = exp(-r^2 / 2)`, `u1 = u2 = 0`.
    pub fn gaussian() -> Self {
        Self::new(|r| c((-r * r / 2.0).exp(), 0.0), |_| ZERO, |_| ZERO)
    }

    pub fn eval(&self, r: f64) -> Vec3 {
        [(self.u0)(r), (self.u1)(r), (self.u2)(r)]
    }
}

/// System data `(u1 + i r u0, u1 - i r u0, u2 + r^2 u0)` of the damped MGT equation.
pub fn mgt_map(data: &MgtData, dim_n: u32) -> InitialData {
    let d = data.clone();
    InitialData::custom(dim_n, move |r| {
        let [u0, u1, u2] = d.eval(r);
        [u1 + I * r * u0, u1 - I * r * u0, mgt_v0(u0, u2, r)]
    })
}

/// `v0_hat = u2_hat + r^2 u0_hat`
pub fn mgt_v0(u0: C64, u2: C64, r: f64) -> C64 {
    u2 + u0 * (r * r)
}

/// Inverse of [`mgt_v0`]: `u2_hat = v0_hat - r^2 u0_hat`.
pub fn mgt_u2(u0: C64, v0: C64, r: f64) -> C64 {
    v0 - u0 * (r * r)
}

/// Companion matrix acting on `(u, u_t, u_tt)`.
pub fn mgt_companion(r: f64) -> ComplexMat3 {
    let r2 = r * r;
    ComplexMat3::from_real([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-r2, -r2, -1.0]])
}

/// Propagator from the factorization `(l + 1)(l^2 + r^2)`.
pub fn mgt_propagator(r: f64) -> NodePropagator {
    let lambda = [c(0.0, r), c(0.0, -r), c(-1.0, 0.0)];
    let cols = lambda.map(|l| {
        let v = [ONE, l, l * l];
        let n = vec_norm(&v);
        [v[0] / n, v[1] / n, v[2] / n]
    });
    let e = EigenBranches { lambda, vectors: ComplexMat3::from_columns(cols), defect: r == 0.0 };
    NodePropagator::from_parts(mgt_companion(r), &e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgtState {
    pub grid: Vec<f64>,
    pub triples: Vec<Vec3>,
    pub time: f64,
}

pub fn mgt_evolve(data: &MgtData, t: f64, quad: &RadialQuadrature) -> Result<MgtState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("time {t} must be finite and non-negative")));
    }
    let triples = par::map(quad.len(), |k| {
        let r = quad.nodes[k];
        mgt_propagator(r).apply(t, &data.eval(r))
    });
    Ok(MgtState { grid: quad.nodes.clone(), triples, time: t })
}

/// Per-frequency density `|u_tt + u_t|^2 / 2 + r^2 |u_t + u|^2 / 2`.
pub fn mgt_energy_density(r: f64, u: &Vec3) -> f64 {
    0.5 * (u[2] + u[1]).norm_sqr() + 0.5 * r * r * (u[1] + u[0]).norm_sqr()
}

pub fn mgt_state_energy(state: &MgtState, quad: &RadialQuadrature) -> f64 {
    let terms: Vec<f64> =
        (0..quad.len()).map(|k| quad.measure(k) * mgt_energy_density(state.grid[k], &state.triples[k])).collect();
    pairwise_sum(&terms)
}

pub fn mgt_energy(data: &MgtData, t: f64, quad: &RadialQuadrature) -> Result<f64> {
    Ok(mgt_state_energy(&mgt_evolve(data, t, quad)?, quad))
}

/// Largest `|E(t) - E(0)| / E(0)` over `times`.
pub fn mgt_energy_drift(data: &MgtData, times: &[f64], quad: &RadialQuadrature) -> Result<f64> {
    let e0 = mgt_energy(data, 0.0, quad)?;
    let mut worst: f64 = 0.0;
    for &t in times {
        let e = mgt_energy(data, t, quad)?;
        worst = worst.max(if e0 == 0.0 { e.abs() } else { (e - e0).abs() / e0 });
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{classify, LossClass};
    use crate::rates::{predicted_exponent, Term};

    #[test]
    fn presets() {
        let p = preset("plate").unwrap();
        assert_eq!((p.params.sigma, p.params.alpha, p.params.damped), (2.0, 0.5, false));
        let d = preset("plate_damped").unwrap();
        assert!(d.params.damped);
        let e = |p: &SystemParams| predicted_exponent(p, 0.0, 0.0, 0.0, Term::MomentTerm).unwrap().value;
        assert_eq!(e(&p.params), 0.25);
        assert_eq!(e(&p.params), e(&d.params));
        assert_eq!(classify(&preset("dmgt").unwrap().params).loss, LossClass::RegularityLoss);
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn map_examples() {
        let g = mgt_map(&MgtData::new(|_| ZERO, |_| ZERO, |r| c((-r * r).exp(), 0.0)), 1);
        let v = g.eval(0.7);
        assert_eq!([v[0], v[1]], [ZERO, ZERO]);
        assert_eq!(v[2], c((-0.49f64).exp(), 0.0));
        let g = mgt_map(&MgtData::new(|r| c((-r * r).exp(), 0.0), |_| ZERO, |_| ZERO), 1);
        for r in [0.0, 0.3, 2.0] {
            assert!((g.eval(r)[2] - c(r * r * (-r * r).exp(), 0.0)).norm() < 1e-16);
        }
        let (u0, u2, r) = (c(0.3, -1.0), c(2.0, 0.5), 1.7);
        assert!((mgt_u2(u0, mgt_v0(u0, u2, r), r) - u2).norm() < 1e-15);
    }

    #[test]
    fn node_energy_is_constant() {
        let p = mgt_propagator(1.0);
        let u = [c(1.0, 0.0), c(0.5, 0.2), c(-2.0, 0.0)];
        let e0 = mgt_energy_density(1.0, &u);
        for t in [0.5, 7.0, 100.0] {
            assert!((mgt_energy_density(1.0, &p.apply(t, &u)) / e0 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn propagator_solves_the_equation() {
        // u_t = C u, checked by a centered difference.
        let (r, t, h) = (0.8, 2.0, 1e-5);
        let p = mgt_propagator(r);
        let u0 = [c(1.0, 0.0), c(0.2, 0.0), c(-0.3, 0.0)];
        let (a, b) = (p.apply(t + h, &u0), p.apply(t - h, &u0));
        let du: Vec3 = [0, 1, 2].map(|k| (a[k] - b[k]) / (2.0 * h));
        let want = mgt_companion(r).mul_vec(&p.apply(t, &u0));
        for k in 0..3 {
            assert!((du[k] - want[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_data_has_zero_energy() {
        let q = RadialQuadrature::new(1e-2, 10.0, 4, 4, 1).unwrap();
        let z = MgtData::new(|_| ZERO, |_| ZERO, |_| ZERO);
        assert_eq!(mgt_energy(&z, 3.0, &q).unwrap(), 0.0);
    }
}
