//! Exact per-frequency evolution, initial-data families and Fourier-side norms.

use std::fmt;
use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::eigen::{raw_eigen, EigenBranches};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::mat3::{c, vec_norm, ComplexMat3, Vec3, C64, ZERO};
use crate::par::{self, pairwise_sum};
use crate::params::{key_function, SystemParams, Zone, ZonePartition};
use crate::quadrature::RadialQuadrature;
use crate::rates::fit_exponential_rate;
use crate::symbol::assemble;

/// Eigenbases with condition number above this are replaced by the dense exponential.
pub const MAX_MODAL_CONDITION: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataFamily {
    Gaussian,
    MomentFree,
    Custom,
}

type Profile = Arc<dyn Fn(f64) -> Vec3 + Send + Sync>;

/// Radial Fourier-side data `g_hat(r)`.
///
/// `Gaussian`: `c_j exp(-a r^2 / 2)`, the transform of `c_j` times the unit-mass
/// Gaussian of variance `a`. `MomentFree`: `c_j r exp(-a r^2 / 2) / sqrt(n)`, the
/// spherical mean-square profile of `xi_1 exp(-a |xi|^2 / 2)`, i.e. of `-i d_1` applied
/// to that Gaussian.
#[derive(Clone)]
pub struct InitialData {
    family: DataFamily,
    scale: f64,
    weights: Vec3,
    dim_n: u32,
    custom: Option<Profile>,
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialData")
            .field("family", &self.family)
            .field("scale", &self.scale)
            .field("weights", &self.weights)
            .field("dim_n", &self.dim_n)
            .finish()
    }
}

/// Weights used when none are given: real structure, all components active.
pub fn default_weights() -> Vec3 {
    [c(1.0, 1.0), c(1.0, -1.0), c(1.0, 0.0)]
}

impl InitialData {
    fn closed_form(family: DataFamily, scale: f64, weights: Vec3, dim_n: u32) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || dim_n == 0 || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParams(format!("bad data: scale {scale}, n = {dim_n}")));
        }
        Ok(Self { family, scale, weights, dim_n, custom: None })
    }

    pub fn gaussian(scale: f64, weights: Vec3, dim_n: u32) -> Result<Self> {
        Self::closed_form(DataFamily::Gaussian, scale, weights, dim_n)
    }

    pub fn moment_free(scale: f64, weights: Vec3, dim_n: u32) -> Result<Self> {
        Self::closed_form(DataFamily::MomentFree, scale, weights, dim_n)
    }

    pub fn custom(dim_n: u32, f: impl Fn(f64) -> Vec3 + Send + Sync + 'static) -> Self {
        Self { family: DataFamily::Custom, scale: 0.0, weights: [ZERO; 3], dim_n, custom: Some(Arc::new(f)) }
    }

    /// `weights (1 + r^2)^(-p/2)`: algebraic tail `|g_hat| ~ r^-p`.
    pub fn algebraic_tail(p: f64, weights: Vec3, dim_n: u32) -> Self {
        Self::custom(dim_n, move |r| {
            let s = (1.0 + r * r).powf(-p / 2.0);
            [weights[0] * s, weights[1] * s, weights[2] * s]
        })
    }

    pub fn family(&self) -> DataFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn weights(&self) -> Vec3 {
        self.weights
    }

    pub fn dim_n(&self) -> u32 {
        self.dim_n
    }

    pub fn eval(&self, r: f64) -> Vec3 {
        let f = match self.family {
            DataFamily::Custom => return (self.custom.as_ref().unwrap())(r),
            DataFamily::Gaussian => (-self.scale * r * r / 2.0).exp(),
            DataFamily::MomentFree => r * (-self.scale * r * r / 2.0).exp() / (self.dim_n as f64).sqrt(),
        };
        [self.weights[0] * f, self.weights[1] * f, self.weights[2] * f]
    }

    /// `P = g_hat(0)`
    pub fn moments(&self) -> Vec3 {
        self.eval(0.0)
    }
}

/// `(1 + |x|)^kappa`-weighted `L^1` norm of the physical-space data.
pub fn weighted_l1_norm(data: &InitialData, kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidParams(format!("kappa = {kappa} outside [0, 1]")));
    }
    if data.family == DataFamily::Custom {
        return Err(Error::CustomFamily);
    }
    let (a, n) = (data.scale, data.dim_n);
    let nf = n as f64;
    let density = |x: f64| (2.0 * std::f64::consts::PI * a).powf(-nf / 2.0) * (-x * x / (2.0 * a)).exp();
    let sd = a.sqrt();
    let q = RadialQuadrature::new(1e-3 * sd, 40.0 * sd, 48, 8, n)?;
    let amp = vec_norm(&data.weights);
    match data.family {
        DataFamily::Custom => unreachable!(),
        DataFamily::Gaussian => Ok(amp * q.integrate(|x| (1.0 + x).powf(kappa) * density(x))),
        DataFamily::MomentFree => {
            // |d_1 phi| = |x_1| phi / a; spherical integral of |theta_1| over the area.
            let s1 = 2.0 * std::f64::consts::PI.powf((nf - 1.0) / 2.0) / gamma((nf + 1.0) / 2.0);
            Ok(amp * s1 / q.sphere_area * q.integrate(|x| (1.0 + x).powf(kappa) * x / a * density(x)))
        }
    }
}

/// Propagator `exp(t A(r))` at one frequency.
#[derive(Clone, Copy, Debug)]
pub enum NodePropagator {
    Modal { lambda: [C64; 3], vectors: ComplexMat3, inverse: ComplexMat3 },
    Dense { symbol: ComplexMat3 },
}

fn condition(v: &ComplexMat3, vi: &ComplexMat3) -> f64 {
    v.norm1() * vi.norm1()
}

impl NodePropagator {
    pub fn new(p: &SystemParams, r: f64) -> Result<Self> {
        let a = assemble(p, r)?;
        let e = raw_eigen(p, r)?;
        Ok(Self::from_parts(a, &e))
    }

    pub fn from_parts(symbol: ComplexMat3, e: &EigenBranches) -> Self {
        if !e.defect {
            if let Some(inverse) = e.vectors.inverse() {
                if condition(&e.vectors, &inverse) <= MAX_MODAL_CONDITION {
                    return Self::Modal { lambda: e.lambda, vectors: e.vectors, inverse };
                }
            }
        }
        Self::Dense { symbol }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Self::Modal { .. })
    }

    pub fn apply(&self, t: f64, g: &Vec3) -> Vec3 {
        if t == 0.0 {
            return *g;
        }
        match self {
            Self::Modal { lambda, vectors, inverse } => {
                let y = inverse.mul_vec(g);
                let z = [y[0] * (lambda[0] * t).exp(), y[1] * (lambda[1] * t).exp(), y[2] * (lambda[2] * t).exp()];
                vectors.mul_vec(&z)
            }
            Self::Dense { symbol } => expm(&symbol.scale_re(t)).mul_vec(g),
        }
    }
}

/// Amplitudes on a radial grid at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralState {
    pub grid: Vec<f64>,
    pub amplitudes: Vec<Vec3>,
    pub time: f64,
    pub moments: Vec3,
}

impl SpectralState {
    pub fn zeros_like(&self) -> Self {
        Self { amplitudes: vec![[ZERO; 3]; self.grid.len()], ..self.clone() }
    }

    /// Node-wise difference `self - other` on a shared grid.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidParams("states live on different grids".into()));
        }
        let amplitudes =
            self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| [a[0] - b[0], a[1] - b[1], a[2] - b[2]]).collect();
        Ok(Self { amplitudes, ..self.clone() })
    }
}

/// Propagators and data sampled on a quadrature grid, ready to be evaluated at any time.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub params: SystemParams,
    pub grid: Vec<f64>,
    pub initial: Vec<Vec3>,
    pub propagators: Vec<NodePropagator>,
    pub moments: Vec3,
}

impl Evolution {
    pub fn new(p: &SystemParams, data: &InitialData, quad: &RadialQuadrature) -> Result<Self> {
        p.validate()?;
        let built: Vec<Result<NodePropagator>> = par::map(quad.len(), |k| NodePropagator::new(p, quad.nodes[k]));
        let propagators = built.into_iter().collect::<Result<Vec<_>>>()?;
        let initial: Vec<Vec3> = quad.nodes.iter().map(|&r| data.eval(r)).collect();
        Ok(Self { params: *p, grid: quad.nodes.clone(), initial, propagators, moments: data.moments() })
    }

    pub fn state(&self, t: f64) -> Result<SpectralState> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("time {t} must be finite and non-negative")));
        }
        let amplitudes = par::map(self.grid.len(), |k| self.propagators[k].apply(t, &self.initial[k]));
        Ok(SpectralState { grid: self.grid.clone(), amplitudes, time: t, moments: self.moments })
    }

    /// Continue an arbitrary state (same grid) by `dt`.
    pub fn advance(&self, state: &SpectralState, dt: f64) -> Result<SpectralState> {
        if state.grid != self.grid || !(dt >= 0.0) {
            return Err(Error::InvalidParams("state grid mismatch or negative step".into()));
        }
        let amplitudes = par::map(self.grid.len(), |k| self.propagators[k].apply(dt, &state.amplitudes[k]));
        Ok(SpectralState { amplitudes, time: state.time + dt, ..state.clone() })
    }
}

pub fn propagate(p: &SystemParams, data: &InitialData, t: f64, quad: &RadialQuadrature) -> Result<SpectralState> {
    Evolution::new(p, data, quad)?.state(t)
}

pub fn propagate_series(
    p: &SystemParams,
    data: &InitialData,
    times: &[f64],
    quad: &RadialQuadrature,
) -> Result<Vec<SpectralState>> {
    let ev = Evolution::new(p, data, quad)?;
    times.iter().map(|&t| ev.state(t)).collect()
}

/// Node indices selected by an optional zone.
pub fn zone_nodes(grid: &[f64], zone: Option<(Zone, &ZonePartition)>) -> Vec<usize> {
    (0..grid.len()).filter(|&k| zone.is_none_or(|(z, zp)| zp.contains(z, grid[k]))).collect()
}

/// Fourier-side `H^{s0}` seminorm: `(omega sum w r^(n-1) r^(2 s0) |w_hat|^2)^(1/2)`,
/// without a `(2 pi)^-n` factor.
pub fn sobolev_norm(
    state: &SpectralState,
    s0: f64,
    zone: Option<(Zone, &ZonePartition)>,
    quad: &RadialQuadrature,
) -> Result<f64> {
    weighted_sobolev_norm(state, s0, zone, quad, [1.0; 3])
}

/// Energy norm: component weights `(1/2, 1/2, 1)`, in which both systems are dissipative.
pub fn energy_norm(state: &SpectralState, s0: f64, zone: Option<(Zone, &ZonePartition)>, quad: &RadialQuadrature) -> Result<f64> {
    weighted_sobolev_norm(state, s0, zone, quad, [0.5, 0.5, 1.0])
}

fn weighted_sobolev_norm(
    state: &SpectralState,
    s0: f64,
    zone: Option<(Zone, &ZonePartition)>,
    quad: &RadialQuadrature,
    h: [f64; 3],
) -> Result<f64> {
    if !(s0 >= 0.0) {
        return Err(Error::InvalidParams(format!("s0 = {s0} must be non-negative")));
    }
    if state.grid.len() != quad.len() || state.grid.first() != quad.nodes.first() {
        return Err(Error::InvalidParams("state grid does not match the quadrature".into()));
    }
    let idx = zone_nodes(&state.grid, zone);
    if idx.is_empty() {
        return Err(Error::EmptyZone);
    }
    let terms: Vec<f64> = idx
        .iter()
        .map(|&k| {
            let w = &state.amplitudes[k];
            let m = h[0] * w[0].norm_sqr() + h[1] * w[1].norm_sqr() + h[2] * w[2].norm_sqr();
            let r = state.grid[k];
            let weight = if s0 == 0.0 { 1.0 } else { r.powf(2.0 * s0) };
            quad.measure(k) * weight * m
        })
        .collect();
    Ok(pairwise_sum(&terms).sqrt())
}

/// Conjugation structure `(a, b, v) -> (conj b, conj a, conj v)`.
pub fn conjugate_swap(g: &Vec3) -> Vec3 {
    [g[1].conj(), g[0].conj(), g[2].conj()]
}

/// Weights along the slowest mode at a very small frequency, made invariant under
/// [`conjugate_swap`] and normalized; data built from them excite the decay-limiting branch.
pub fn slow_mode_weights(p: &SystemParams) -> Result<Vec3> {
    let e = raw_eigen(p, 1e-5)?;
    let j = (0..3).max_by(|&a, &b| e.lambda[a].re.total_cmp(&e.lambda[b].re)).unwrap();
    let v = e.vectors.column(j);
    let w = conjugate_swap(&v);
    let z: C64 = (0..3).map(|k| v[k].conj() * w[k]).sum();
    let out = if z.norm() > 0.999 {
        let ph = (z / z.norm()).sqrt();
        [v[0] * ph, v[1] * ph, v[2] * ph]
    } else {
        [v[0] + w[0], v[1] + w[1], v[2] + w[2]]
    };
    let n = vec_norm(&out);
    Ok([out[0] / n, out[1] / n, out[2] / n])
}

/// `|w_hat(t, r)| / |w_hat(0, r)|` at a single frequency.
pub fn node_amplification(p: &SystemParams, r: f64, g: &Vec3, times: &[f64]) -> Result<Vec<f64>> {
    let prop = NodePropagator::new(p, r)?;
    let g0 = vec_norm(g);
    if !(g0 > 0.0) {
        return Err(Error::InvalidParams("zero data at node".into()));
    }
    Ok(times.iter().map(|&t| vec_norm(&prop.apply(t, g)) / g0).collect())
}

/// Fitted `c` in `|w_hat(t, r)| ~ exp(-c t)` at one frequency.
pub fn node_decay_rate(p: &SystemParams, r: f64, g: &Vec3, times: &[f64]) -> Result<f64> {
    fit_exponential_rate(times, &node_amplification(p, r, g, times)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeReport {
    /// Rate constant in `exp(-c key(r) t)`.
    pub c: f64,
    /// Envelope constant on the given grid.
    pub big_c: f64,
    /// Envelope constant on the grid with doubled nodes.
    pub big_c_refined: f64,
    /// Largest `ratio / big_c - 1` on the refined grid; at most 0 when the envelope transfers.
    pub max_violation: f64,
    pub nodes_skipped: usize,
    pub stable: bool,
}

fn envelope_on(p: &SystemParams, data: &InitialData, times: &[f64], quad: &RadialQuadrature) -> Result<(f64, Vec<f64>, usize)> {
    let ev = Evolution::new(p, data, quad)?;
    let ratios: Vec<Result<Option<f64>>> = par::map(quad.len(), |k| {
        let r = quad.nodes[k];
        let key = key_function(p, r);
        let e = raw_eigen(p, r)?;
        Ok((key > 0.0).then(|| -e.max_real() / key))
    });
    let mut rho_min = f64::INFINITY;
    for x in ratios {
        if let Some(v) = x? {
            rho_min = rho_min.min(v);
        }
    }
    let c = 0.9 * rho_min;
    let mut skipped = 0;
    let mut per_node = Vec::with_capacity(quad.len());
    for k in 0..quad.len() {
        let g0 = vec_norm(&ev.initial[k]);
        if g0 < 1e-300 {
            skipped += 1;
            per_node.push(f64::NAN);
            continue;
        }
        let key = key_function(p, quad.nodes[k]);
        let mut best = f64::NEG_INFINITY;
        for &t in times {
            let a = vec_norm(&ev.propagators[k].apply(t, &ev.initial[k]));
            if a > 0.0 {
                best = best.max(a.ln() + c * key * t - g0.ln());
            }
        }
        per_node.push(best);
    }
    Ok((c, per_node, skipped))
}

/// Fits `|w_hat(t, r)| <= C exp(-c key(r) t) |w_hat(0, r)|` over the grid and times.
pub fn pointwise_envelope_check(
    p: &SystemParams,
    data: &InitialData,
    times: &[f64],
    quad: &RadialQuadrature,
) -> Result<EnvelopeReport> {
    if times.is_empty() || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::InvalidParams("need non-negative times".into()));
    }
    let (c, logs, nodes_skipped) = envelope_on(p, data, times, quad)?;
    let big_c = logs.iter().copied().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max).exp();
    if nodes_skipped == quad.len() {
        return Err(Error::InvalidParams("data vanish on the grid".into()));
    }
    let (_, logs_ref, _) = envelope_on(p, data, times, &quad.refined())?;
    let big_c_refined = logs_ref.iter().copied().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max).exp();
    let max_violation = big_c_refined / big_c - 1.0;
    let stable = c > 0.0 && big_c.is_finite() && big_c_refined.is_finite() && (big_c_refined / big_c - 1.0).abs() <= 0.05;
    Ok(EnvelopeReport { c, big_c, big_c_refined, max_violation, nodes_skipped, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::vec_sub;

    #[test]
    fn zero_time_is_identity() {
        let q = RadialQuadrature::new(1e-2, 1e2, 8, 4, 1).unwrap();
        let d = InitialData::gaussian(1.0, default_weights(), 1).unwrap();
        let s = propagate(&SystemParams::undamped(1.0, 0.3), &d, 0.0, &q).unwrap();
        for (k, r) in q.nodes.iter().enumerate() {
            assert_eq!(s.amplitudes[k], d.eval(*r));
        }
    }

    #[test]
    fn real_root_mode_decay() {
        let p = SystemParams::undamped(1.0, 0.5);
        let e = raw_eigen(&p, 1.0).unwrap();
        let j = (0..3).find(|&j| e.lambda[j].im.abs() < 1e-12).unwrap();
        let g = e.vectors.column(j);
        let a = node_amplification(&p, 1.0, &g, &[5.0]).unwrap()[0];
        let expected = (-0.569_840_290_998_053_2f64 * 5.0).exp();
        assert!((a / expected - 1.0).abs() < 1e-8);
    }

    #[test]
    fn modal_and_dense_agree() {
        let p = SystemParams::damped(1.5, 0.7);
        let a = assemble(&p, 2.0).unwrap();
        let e = raw_eigen(&p, 2.0).unwrap();
        let m = NodePropagator::from_parts(a, &e);
        assert!(m.is_modal());
        let d = NodePropagator::Dense { symbol: a };
        let g = default_weights();
        for t in [0.1, 3.0, 40.0] {
            let (x, y) = (m.apply(t, &g), d.apply(t, &g));
            assert!(vec_norm(&vec_sub(&x, &y)) <= 1e-11 * vec_norm(&x).max(1e-300), "t = {t}");
        }
    }

    #[test]
    fn gaussian_norm_closed_form() {
        let q = RadialQuadrature::default_for(1).unwrap();
        let d = InitialData::gaussian(1.0, [c(1.0, 0.0); 3], 1).unwrap();
        let s = propagate(&SystemParams::undamped(1.0, 0.0), &d, 0.0, &q).unwrap();
        let v = sobolev_norm(&s, 0.0, None, &q).unwrap();
        assert!((v - (3.0 * std::f64::consts::PI.sqrt()).sqrt()).abs() < 1e-10);
        assert_eq!(sobolev_norm(&s.zeros_like(), 0.0, None, &q).unwrap(), 0.0);
    }

    #[test]
    fn empty_zone_rejected() {
        let q = RadialQuadrature::new(1.0, 5.0, 4, 4, 1).unwrap();
        let d = InitialData::gaussian(1.0, default_weights(), 1).unwrap();
        let s = propagate(&SystemParams::undamped(1.0, 0.0), &d, 1.0, &q).unwrap();
        let zp = ZonePartition::default();
        assert!(matches!(sobolev_norm(&s, 0.0, Some((Zone::Large, &zp)), &q), Err(Error::EmptyZone)));
    }

    #[test]
    fn weighted_norms() {
        let g = InitialData::gaussian(1.0, [c(1.0, 0.0), ZERO, ZERO], 1).unwrap();
        assert!((weighted_l1_norm(&g, 0.0).unwrap() - 1.0).abs() < 1e-12);
        // E(1 + |X|) for a standard normal X
        let e1 = 1.0 + (2.0 / std::f64::consts::PI).sqrt();
        assert!((weighted_l1_norm(&g, 1.0).unwrap() - e1).abs() < 1e-12);
        let m = InitialData::moment_free(1.0, [c(1.0, 0.0), ZERO, ZERO], 1).unwrap();
        assert_eq!(m.moments(), [ZERO; 3]);
        // int |x| phi(x) dx = sqrt(2/pi) for the derivative of the unit Gaussian
        assert!((weighted_l1_norm(&m, 0.0).unwrap() - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
        assert!(weighted_l1_norm(&m, 1.0).unwrap().is_finite());
        let x = InitialData::custom(1, |_| [ZERO; 3]);
        assert!(matches!(weighted_l1_norm(&x, 0.0), Err(Error::CustomFamily)));
    }

    #[test]
    fn slow_weights_are_structured() {
        for p in [SystemParams::undamped(1.0, 0.0), SystemParams::undamped(1.0, 0.75), SystemParams::damped(2.0, 0.3)] {
            let w = slow_mode_weights(&p).unwrap();
            assert!(vec_norm(&vec_sub(&conjugate_swap(&w), &w)) < 1e-12);
            assert!((vec_norm(&w) - 1.0).abs() < 1e-14);
        }
    }
}
