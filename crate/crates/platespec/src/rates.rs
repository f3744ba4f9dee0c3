//! Log-log decay fits and the predicted decay exponents.

use crate::error::{Error, Result};
use crate::params::{classify, LossClass, SystemParams};

/// Least-squares line through `(ln t, ln value)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Straight-line least squares; returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, my - slope * mx, r2)
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

pub fn fit_decay(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Fit("times must ascend".into()));
    }
    let tol = 1e-9 * window.1.abs();
    let pts: Vec<(f64, f64)> =
        times.iter().zip(values).filter(|(t, _)| **t >= window.0 - tol && **t <= window.1 + tol).map(|(t, v)| (*t, *v)).collect();
    if pts.len() < 6 {
        return Err(Error::Fit(format!("{} points in window, need at least 6", pts.len())));
    }
    if pts.iter().any(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Fit("non-positive value in window".into()));
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&lx, &ly);
    Ok(DecayFit { slope, intercept, r_squared, window, n_points: pts.len() })
}

/// Geometric time grid with `per_decade` points per decade, endpoints included.
pub fn geometric_times(t0: f64, t1: f64, per_decade: usize) -> Vec<f64> {
    let decades = (t1 / t0).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|k| t0 * 10f64.powf(decades * k as f64 / n as f64)).collect()
}

/// Fitted exponential rate `c` in `value ~ exp(-c t)` by least squares on `ln value`.
pub fn fit_exponential_rate(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() < 2 || values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Fit("need at least two positive samples".into()));
    }
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(-linear_fit(times, &ly).0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// Data in the weighted space `L^{1,kappa}`.
    WeightedL1Term,
    /// The moment `P_{w0}` (the `kappa = 0` contribution).
    MomentTerm,
    /// Large-frequency term with `ell` extra derivatives on the data.
    RegularityLossTerm,
    /// Exponentially decaying middle- or large-frequency term.
    ExponentialTerm,
    /// Extra decay gained by subtracting the small-frequency profile.
    ProfileImprovement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    UndampedDecay,
    DampedDecay,
    UndampedRefinement,
    DampedRefinement,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPrediction {
    /// Positive decay exponent `e` in `(1 + t)^(-e)`; infinite for exponential terms.
    pub value: f64,
    pub source: Source,
    pub term: Term,
    /// For the undamped system with `alpha < 1/3`: whether the regularity-loss term
    /// `ell / (2 sigma (1 - 3 alpha))` controls the rate over the moment term.
    pub regularity_loss_dominates: Option<bool>,
}

/// Small-frequency decay exponent for data with `kappa` vanishing moments.
pub fn small_frequency_exponent(p: &SystemParams, s0: f64, kappa: f64) -> f64 {
    let (s, a, n) = (p.sigma, p.alpha, p.dim_n as f64);
    let num = n + 2.0 * (s0 + kappa);
    match (p.damped, a <= 0.5) {
        (_, true) => num / (2.0 * (2.0 * s - 2.0 * s * a)),
        (false, false) => num / (2.0 * (6.0 * s * a - 2.0 * s)),
        (true, false) => num / (4.0 * s * a),
    }
}

/// Extra decay of the small-frequency difference after subtracting the profile.
pub fn improvement_exponent(p: &SystemParams) -> Result<f64> {
    let a = p.alpha;
    if p.is_half() {
        return Err(Error::Regime("no profile improvement at alpha = 1/2".into()));
    }
    Ok(if a < 0.5 {
        (1.0 - 2.0 * a) / (2.0 * (1.0 - a))
    } else if p.damped {
        (2.0 * a - 1.0) / (2.0 * a)
    } else {
        (2.0 * a - 1.0) / (2.0 * (3.0 * a - 1.0))
    })
}

pub fn predicted_exponent(p: &SystemParams, s0: f64, kappa: f64, ell: f64, term: Term) -> Result<ExponentPrediction> {
    if s0 < 0.0 || !(0.0..=1.0).contains(&kappa) || ell < 0.0 {
        return Err(Error::InvalidParams("need s0 >= 0, kappa in [0, 1], ell >= 0".into()));
    }
    let loss = classify(p).loss == LossClass::RegularityLoss;
    let (s, a, n) = (p.sigma, p.alpha, p.dim_n as f64);
    let loss_rate = |ell: f64| ell / (2.0 * s * (1.0 - 3.0 * a));
    let dominance = loss.then(|| ell < (1.0 - 3.0 * a) / (2.0 * (1.0 - a)) * (n + 2.0 * s0));
    let decay_source = if p.damped { Source::DampedDecay } else { Source::UndampedDecay };
    let refine_source = if p.damped { Source::DampedRefinement } else { Source::UndampedRefinement };
    let (value, source) = match term {
        Term::WeightedL1Term => (small_frequency_exponent(p, s0, kappa), decay_source),
        Term::MomentTerm => (small_frequency_exponent(p, s0, 0.0), decay_source),
        Term::RegularityLossTerm => {
            if !loss {
                return Err(Error::Regime("regularity-loss term needs the undamped system with alpha < 1/3".into()));
            }
            (loss_rate(ell), decay_source)
        }
        Term::ExponentialTerm => {
            if loss {
                return Err(Error::Regime("large frequencies decay polynomially when alpha < 1/3".into()));
            }
            (f64::INFINITY, decay_source)
        }
        Term::ProfileImprovement => (improvement_exponent(p)?, refine_source),
    };
    Ok(ExponentPrediction { value, source, term, regularity_loss_dominates: dominance })
}

/// Exponent of the refined small-frequency estimate: solution rate plus improvement.
pub fn refined_exponent(p: &SystemParams, s0: f64, kappa: f64) -> Result<f64> {
    Ok(small_frequency_exponent(p, s0, kappa) + improvement_exponent(p)?)
}
