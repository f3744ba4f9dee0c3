//! Browser bindings: eigenvalue curves, key-function ratio and a decay curve.

use wasm_bindgen::prelude::*;

use platespec::eigen::{branch_sweep, log_grid};
use platespec::evolve::{default_weights, sobolev_norm, Evolution};
use platespec::params::key_function;
use platespec::rates::{fit_decay, geometric_times, predicted_exponent, Term};
use platespec::{InitialData, RadialQuadrature, SystemParams, Zone, ZonePartition};

fn js(e: platespec::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Log grid fine enough for branch tracking: consecutive ratio at most 1.1.
fn tracking_grid(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    let need = ((r_max / r_min).ln() / 1.1f64.ln()).ceil() as usize + 1;
    log_grid(r_min, r_max, n.max(need).max(2))
}

fn params(sigma: f64, alpha: f64, damped: bool) -> Result<SystemParams, JsError> {
    SystemParams::new(sigma, alpha, damped, 1).map_err(js)
}

/// Rows of `[r, re l1, re l2, re l3, im l1, im l2, im l3]`, flattened, over at least `n` log-spaced `r`.
#[wasm_bindgen]
pub fn eigen_curves(sigma: f64, alpha: f64, damped: bool, r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let p = params(sigma, alpha, damped)?;
    let grid = tracking_grid(r_min, r_max, n);
    let sweep = branch_sweep(&p, &grid).map_err(js)?;
    let mut out = Vec::with_capacity(7 * grid.len());
    for (r, e) in grid.iter().zip(&sweep.branches) {
        out.push(*r);
        out.extend(e.lambda.iter().map(|l| l.re));
        out.extend(e.lambda.iter().map(|l| l.im));
    }
    Ok(out)
}

/// Rows of `[r, key(r), -max Re l(r) / key(r)]`, flattened.
#[wasm_bindgen]
pub fn key_ratio(sigma: f64, alpha: f64, damped: bool, r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let p = params(sigma, alpha, damped)?;
    let grid = tracking_grid(r_min, r_max, n);
    let sweep = branch_sweep(&p, &grid).map_err(js)?;
    let mut out = Vec::with_capacity(3 * grid.len());
    for (&r, e) in grid.iter().zip(&sweep.branches) {
        let k = key_function(&p, r);
        out.extend([r, k, -e.max_real() / k]);
    }
    Ok(out)
}

/// Small-zone `H^s0` norm of Gaussian or moment-free data on a coarse grid.
///
/// Returns `[fitted slope, predicted slope, t0, n0, t1, n1, ...]`; the fit uses the last two decades.
#[wasm_bindgen]
pub fn decay_curve(sigma: f64, alpha: f64, damped: bool, s0: f64, moment_free: bool, t_max: f64) -> Result<Vec<f64>, JsError> {
    let p = params(sigma, alpha, damped)?;
    let zones = ZonePartition::default();
    let quad = RadialQuadrature::new(1e-5, 1e3, 160, 8, 1).map_err(js)?.with_breakpoints(&[zones.eps, zones.big_n]);
    let w = default_weights();
    let data = if moment_free { InitialData::moment_free(1.0, w, 1) } else { InitialData::gaussian(1.0, w, 1) }.map_err(js)?;
    let ev = Evolution::new(&p, &data, &quad).map_err(js)?;
    let t_max = t_max.clamp(1e2, 1e5);
    let times = geometric_times(1.0, t_max, 8);
    let mut norms = Vec::with_capacity(times.len());
    for &t in &times {
        let st = ev.state(t).map_err(js)?;
        norms.push(sobolev_norm(&st, s0, Some((Zone::Small, &zones)), &quad).map_err(js)?);
    }
    let fit = fit_decay(&times, &norms, (t_max / 100.0, t_max)).map_err(js)?;
    let (kappa, term) = if moment_free { (1.0, Term::WeightedL1Term) } else { (0.0, Term::MomentTerm) };
    let pred = predicted_exponent(&p, s0, kappa, 0.0, term).map_err(js)?;
    let mut out = vec![fit.slope, -pred.value];
    for (t, v) in times.into_iter().zip(norms) {
        out.extend([t, v]);
    }
    Ok(out)
}
