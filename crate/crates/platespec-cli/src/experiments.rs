//! The computations behind each subcommand and sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use platespec::apps::{mgt_energy, MgtData};
use platespec::cubic;
use platespec::diag::{verify_step_identities, IDENTITY_NAMES};
use platespec::eigen::{
    best_assignment, branch_sweep, exact_half_eigen, expansion_error, half_constants_damped, half_constants_undamped, log_grid,
    raw_eigen, ExpansionFamily,
};
use platespec::evolve::{default_weights, node_decay_rate, pointwise_envelope_check, slow_mode_weights, sobolev_norm, Evolution};
use platespec::mat3::{c, vec_norm, vec_sub, C64};
use platespec::params::{key_function, Zone};
use platespec::profiles::{
    fit_improvement, Refinement, COMBINED_DIFFERENCE, LARGE_DIFFERENCE, LARGE_SOLUTION, SMALL_DIFFERENCE, SMALL_SOLUTION,
};
use platespec::rates::{fit_decay, geometric_times, improvement_exponent, loglog_slope, predicted_exponent, Term};
use platespec::symbol::{assemble, CubicCoeffs};
use platespec::{InitialData, RadialQuadrature, SystemParams};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::sweep::Tolerances;
use crate::table::{plot_script, Axes, Cell, Check, Table};

/// Table, plot script and checks produced by one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    /// File stem of the detail table and plot.
    pub stem: &'static str,
    pub table: Table,
    pub plot: String,
    pub checks: Vec<Check>,
}

impl Output {
    pub fn new(stem: &'static str, table: Table, plot: impl FnOnce(&str, &[&str]) -> String, checks: Vec<Check>) -> Self {
        let plot = plot(stem, &table.header);
        Self { stem, table, plot, checks }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

fn label(p: &SystemParams) -> String {
    format!("sigma={} alpha={} {}", p.sigma, p.alpha, if p.damped { "damped" } else { "undamped" })
}

fn shifted(w: (f64, f64)) -> (f64, f64) {
    let h = 10f64.sqrt();
    (w.0 * h, w.1 * h)
}

fn zone_name(z: Zone) -> &'static str {
    match z {
        Zone::Small => "small",
        Zone::Mid => "mid",
        Zone::Large => "large",
    }
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

// ---------------------------------------------------------------- identities

pub const IDENTITY_REGIMES: [(&str, f64, f64); 3] =
    [("alpha<1/3", 0.0, 1.0 / 3.0), ("1/3<=alpha<1/2", 1.0 / 3.0, 0.5), ("alpha>1/2", 0.5, 1.0)];

/// Step-identity residuals at `samples` seeded random `(sigma, alpha, r)` per regime.
pub fn identities(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut header = vec!["regime", "sigma", "alpha", "r"];
    header.extend(IDENTITY_NAMES);
    header.push("max");
    let mut t = Table::new(&header);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    for (name, lo, hi) in IDENTITY_REGIMES {
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let sigma = rng.random_range(1.0..3.0);
            let mut alpha = rng.random_range(lo..hi);
            if lo == 0.5 {
                alpha = 1.5 - alpha;
            }
            let r = 10f64.powf(rng.random_range(-3.0..3.0));
            let res = verify_step_identities(&SystemParams::undamped(sigma, alpha), r)?;
            let m = max_abs(res.values().copied());
            worst = worst.max(m);
            let mut row: Vec<Cell> = vec![name.into(), sigma.into(), alpha.into(), r.into()];
            row.extend(IDENTITY_NAMES.iter().map(|k| Cell::Num(res[k])));
            row.push(m.into());
            t.push(row);
        }
        checks.push(Check::at_most(1, name, "max_identity_residual", worst, tol.identity_residual));
    }
    Ok(Output::new(
        "identities",
        t,
        |s, h| plot_script(s, "step identity residuals", Axes::LogLog, "r", "residual", h, &[(4, 11)]),
        checks,
    ))
}

// ---------------------------------------------------------------- eigen

/// Branches, key-function ratio and expansion error over `r` for the configured system.
pub fn eigen_single(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let p = cfg.params;
    let grid = log_grid(1e-3, 1e3, 151);
    let sweep = branch_sweep(&p, &grid)?;
    let mut t = Table::new(&[
        "r",
        "zone",
        "l1_re",
        "l1_im",
        "l2_re",
        "l2_im",
        "l3_re",
        "l3_im",
        "key",
        "ratio",
        "reconstruction",
        "expansion_error",
    ]);
    let (mut worst_rec, mut top_re, mut lo, mut hi): (f64, f64, f64, f64) = (0.0, f64::NEG_INFINITY, f64::INFINITY, 0.0);
    for (r, e) in grid.iter().copied().zip(&sweep.branches) {
        let zone = cfg.zones.zone_of(r);
        let sym = assemble(&p, r)?;
        let rec = e.reconstruct().map_or(f64::NAN, |m| (m - sym).max_abs() / sym.max_abs());
        if rec.is_finite() {
            worst_rec = worst_rec.max(rec);
        }
        let key = key_function(&p, r);
        let ratio = -e.max_real() / key;
        top_re = top_re.max(e.max_real());
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        let exp_err = if zone == Zone::Mid || p.is_half() { f64::NAN } else { expansion_error(&p, r, zone)? };
        let l = e.lambda;
        t.push(vec![
            r.into(),
            zone_name(zone).into(),
            l[0].re.into(),
            l[0].im.into(),
            l[1].re.into(),
            l[1].im.into(),
            l[2].re.into(),
            l[2].im.into(),
            key.into(),
            ratio.into(),
            rec.into(),
            exp_err.into(),
        ]);
    }
    let case = label(&p);
    let checks = vec![
        Check::at_most(0, case.clone(), "max_real_part", top_re, 0.0),
        Check::at_most(0, case.clone(), "reconstruction", worst_rec, 1e-9),
        Check::in_range(0, case.clone(), "min_key_ratio", lo, tol.key_ratio.0, tol.key_ratio.1),
        Check::in_range(0, case, "max_key_ratio", hi, tol.key_ratio.0, tol.key_ratio.1),
    ];
    Ok(Output::new(
        "eigen",
        t,
        |s, h| plot_script(s, "eigenvalue real parts", Axes::LogLog, "r", "|Re lambda|", h, &[(1, 3), (1, 5), (1, 7)]),
        checks,
    ))
}

/// Numeric roots at `alpha = 1/2` against the closed forms.
pub fn roots(_cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut t = Table::new(&["system", "sigma", "r", "max_rel_error"]);
    let mut checks = Vec::new();
    let y = half_constants_undamped();
    let k = CubicCoeffs::new(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0));
    let sol = cubic::solve(&k);
    let (perm, _) = best_assignment(&sol, &y);
    let cubic_err = max_abs((0..3).map(|j| (sol[perm[j]] - y[j]).norm()));
    t.push(vec!["cubic".into(), f64::NAN.into(), 1.0.into(), cubic_err.into()]);
    checks.push(Check::at_most(2, "l^3+l^2+2l+1", "root_error", cubic_err, tol.half_root));
    let sum: C64 = half_constants_damped().iter().sum();
    checks.push(Check::at_most(2, "damped constants", "|y4+y5+y6-2|", (sum - 2.0).norm(), tol.half_sum));
    for damped in [false, true] {
        for sigma in [1.0, 2.0] {
            let p = SystemParams::new(sigma, 0.5, damped, 1)?;
            let mut worst: f64 = 0.0;
            for r in log_grid(1e-3, 1e3, 61) {
                let exact = exact_half_eigen(&p, r)?;
                let num = raw_eigen(&p, r)?.lambda;
                let (perm, _) = best_assignment(&num, &exact);
                let e = max_abs((0..3).map(|j| (num[perm[j]] - exact[j]).norm())) / r.powf(sigma);
                worst = worst.max(e);
                t.push(vec![(if damped { "damped" } else { "undamped" }).into(), sigma.into(), r.into(), e.into()]);
            }
            checks.push(Check::at_most(2, label(&p), "max_rel_root_error", worst, tol.half_root));
        }
    }
    Ok(Output::new(
        "eigen",
        t,
        |s, h| plot_script(s, "closed-form root error", Axes::LogLog, "r", "relative error", h, &[(3, 4)]),
        checks,
    ))
}

/// The `(system, zone, alpha)` cases of the expansion-order sweep; `sigma = 1`.
pub const EXPANSION_CASES: [(bool, Zone, f64); 8] = [
    (false, Zone::Small, 0.25),
    (false, Zone::Large, 0.25),
    (false, Zone::Small, 0.75),
    (false, Zone::Large, 0.75),
    (true, Zone::Small, 0.25),
    (true, Zone::Large, 0.25),
    (true, Zone::Small, 0.75),
    (true, Zone::Large, 0.75),
];

/// Log-log slope of the expansion error over two decades against the stated remainder exponent.
pub fn expansions(_cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut t = Table::new(&["family", "zone", "sigma", "alpha", "printed_exponent", "fitted_slope"]);
    let mut checks = Vec::new();
    for (damped, zone, alpha) in EXPANSION_CASES {
        let p = SystemParams::new(1.0, alpha, damped, 1)?;
        let fam = ExpansionFamily::select(&p, zone)?;
        let rs = if zone == Zone::Small { log_grid(1e-3, 1e-1, 9) } else { log_grid(10.0, 1e3, 9) };
        let errs: Vec<f64> = rs.iter().map(|&r| expansion_error(&p, r, zone)).collect::<platespec::Result<_>>()?;
        let slope = loglog_slope(&rs, &errs);
        let printed = fam.order(&p).remainder_exponent;
        t.push(vec![format!("{fam:?}").into(), zone_name(zone).into(), 1.0.into(), alpha.into(), printed.into(), slope.into()]);
        checks.push(Check::within(
            3,
            format!("{fam:?} {} {}", zone_name(zone), label(&p)),
            "error_slope",
            slope,
            printed,
            tol.expansion_slope,
        ));
    }
    Ok(Output::new(
        "eigen",
        t,
        |s, h| plot_script(s, "expansion error slopes", Axes::Linear, "alpha", "slope", h, &[(4, 5), (4, 6)]),
        checks,
    ))
}

/// Minimum dissipation rate over `r` in `[0.1, 10]` on a 5 x 9 `(sigma, alpha)` grid.
pub fn gap(_cfg: &RunConfig, _tol: &Tolerances) -> CliResult<Output> {
    let mut t = Table::new(&["sigma", "alpha", "damped", "method", "gap"]);
    let mut checks = Vec::new();
    let rs = log_grid(0.1, 10.0, 101);
    for damped in [false, true] {
        for sigma in [1.0, 1.5, 2.0, 2.5, 3.0] {
            for i in 0..9 {
                let p = SystemParams::new(sigma, i as f64 / 8.0, damped, 1)?;
                let mut g = f64::INFINITY;
                for &r in &rs {
                    let top = if p.is_half() {
                        exact_half_eigen(&p, r)?.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        raw_eigen(&p, r)?.max_real()
                    };
                    g = g.min(-top);
                }
                let method = if p.is_half() { "closed_form" } else { "numeric" };
                t.push(vec![sigma.into(), p.alpha.into(), damped.into(), method.into(), g.into()]);
                checks.push(Check::above(4, label(&p), "min_rate", g, 0.0));
            }
        }
    }
    Ok(Output::new("eigen", t, |s, h| plot_script(s, "middle-zone gap", Axes::LogY, "alpha", "gap", h, &[(2, 5)]), checks))
}

/// One representative per branch of the key functions, for `sigma` in `{1, 2}`.
pub const KEY_ALPHAS_UNDAMPED: [f64; 6] = [0.0, 0.2, 0.4, 0.5, 0.75, 1.0];
pub const KEY_ALPHAS_DAMPED: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Range of `-max Re lambda / key` over `r` in `[1e-3, 1e3]`.
pub fn key(_cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut t = Table::new(&["sigma", "alpha", "damped", "min_ratio", "max_ratio"]);
    let mut checks = Vec::new();
    let rs = log_grid(1e-3, 1e3, 241);
    for sigma in [1.0, 2.0] {
        let cases = KEY_ALPHAS_UNDAMPED.iter().map(|&a| (a, false)).chain(KEY_ALPHAS_DAMPED.iter().map(|&a| (a, true)));
        for (alpha, damped) in cases {
            let p = SystemParams::new(sigma, alpha, damped, 1)?;
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for &r in &rs {
                let q = -raw_eigen(&p, r)?.max_real() / key_function(&p, r);
                lo = lo.min(q);
                hi = hi.max(q);
            }
            t.push(vec![sigma.into(), alpha.into(), damped.into(), lo.into(), hi.into()]);
            checks.push(Check::in_range(5, label(&p), "min_ratio", lo, tol.key_ratio.0, tol.key_ratio.1));
            checks.push(Check::in_range(5, label(&p), "max_ratio", hi, tol.key_ratio.0, tol.key_ratio.1));
        }
    }
    Ok(Output::new(
        "eigen",
        t,
        |s, h| plot_script(s, "rate over key function", Axes::LogY, "alpha", "ratio", h, &[(2, 4), (2, 5)]),
        checks,
    ))
}

// ---------------------------------------------------------------- decay

fn small_zone_series(
    ev: &Evolution,
    times: &[f64],
    s0: &[f64],
    cfg: &RunConfig,
    q: &RadialQuadrature,
) -> CliResult<Vec<Vec<f64>>> {
    let mut out = vec![Vec::with_capacity(times.len()); s0.len() + 1];
    for &t in times {
        let st = ev.state(t)?;
        for (k, &s) in s0.iter().enumerate() {
            out[k].push(sobolev_norm(&st, s, Some((Zone::Small, &cfg.zones)), q)?);
        }
        out[s0.len()].push(sobolev_norm(&st, s0[0], None, q)?);
    }
    Ok(out)
}

fn term_for(kappa: f64) -> Term {
    if kappa == 0.0 {
        Term::MomentTerm
    } else {
        Term::WeightedL1Term
    }
}

/// Norm time series and fitted small-zone slope for the configured run.
pub fn decay_single(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let p = cfg.params;
    let q = cfg.quadrature()?;
    let window = cfg.window_or((1e2, 1e4));
    let times = cfg.times_or(window);
    let ev = Evolution::new(&p, &cfg.data_for(&p)?, &q)?;
    let series = small_zone_series(&ev, &times, &[cfg.s0], cfg, &q)?;
    let mut t = Table::new(&["t", "small_zone_norm", "full_norm"]);
    for (k, &time) in times.iter().enumerate() {
        t.push(vec![time.into(), series[0][k].into(), series[1][k].into()]);
    }
    let kappa = cfg.kappa_value();
    let pred = -predicted_exponent(&p, cfg.s0, kappa, cfg.ell, term_for(kappa))?.value;
    let f0 = fit_decay(&times, &series[0], window)?;
    let f1 = fit_decay(&times, &series[0], shifted(window))?;
    let case = format!("{} s0={} kappa={kappa}", label(&p), cfg.s0);
    let checks = vec![
        Check::within(0, case.clone(), "small_zone_slope", f0.slope, pred, tol.decay_slope),
        Check::at_most(0, case, "slope_shift", (f1.slope - f0.slope).abs(), tol.fit_shift),
    ];
    Ok(Output::new("decay", t, |s, h| plot_script(s, "norm decay", Axes::LogLog, "t", "norm", h, &[(1, 2), (1, 3)]), checks))
}

/// `(sigma, alpha)` of the decay sweep; each runs undamped and damped.
pub const DECAY_CASES: [(f64, f64); 3] = [(1.0, 0.0), (1.0, 0.75), (2.0, 0.5)];

/// Fitted small-zone slopes over the decay matrix, with data along the slowest branch.
pub fn decay_sweep(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let q = cfg.quadrature()?;
    let window = cfg.window_or((1e2, 1e4));
    let times = cfg.times_or(window);
    let mut t =
        Table::new(&["sigma", "alpha", "damped", "family", "kappa", "s0", "predicted", "fitted", "fitted_shifted", "r_squared"]);
    let mut checks = Vec::new();
    for (sigma, alpha) in DECAY_CASES {
        for damped in [false, true] {
            let p = SystemParams::new(sigma, alpha, damped, 1)?;
            let w = slow_mode_weights(&p)?;
            for (family, kappa) in [("gaussian", 0.0), ("moment_free", 1.0)] {
                let data = if kappa == 0.0 { InitialData::gaussian(1.0, w, 1)? } else { InitialData::moment_free(1.0, w, 1)? };
                let ev = Evolution::new(&p, &data, &q)?;
                let s0s = [0.0, 1.0];
                let series = small_zone_series(&ev, &times, &s0s, cfg, &q)?;
                for (k, &s0) in s0s.iter().enumerate() {
                    let pred = -predicted_exponent(&p, s0, kappa, 0.0, term_for(kappa))?.value;
                    let f0 = fit_decay(&times, &series[k], window)?;
                    let f1 = fit_decay(&times, &series[k], shifted(window))?;
                    t.push(vec![
                        sigma.into(),
                        alpha.into(),
                        damped.into(),
                        family.into(),
                        kappa.into(),
                        s0.into(),
                        pred.into(),
                        f0.slope.into(),
                        f1.slope.into(),
                        f0.r_squared.into(),
                    ]);
                    let case = format!("{} {family} s0={s0}", label(&p));
                    checks.push(Check::within(6, case.clone(), "small_zone_slope", f0.slope, pred, tol.decay_slope));
                    checks.push(Check::at_most(6, case, "slope_shift", (f1.slope - f0.slope).abs(), tol.fit_shift));
                }
            }
        }
    }
    Ok(Output::new(
        "decay",
        t,
        |s, h| plot_script(s, "fitted against predicted slopes", Axes::Linear, "predicted", "fitted", h, &[(7, 8)]),
        checks,
    ))
}

// ---------------------------------------------------------------- pointwise

/// Envelope fit `|w(t, r)| <= C exp(-c key(r) t) |w(0, r)|` for the configured run.
pub fn pointwise_single(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let p = cfg.params;
    let q = cfg.quadrature()?;
    let times = match cfg.times {
        Some((a, b)) => geometric_times(a.max(1e-6), b, cfg.per_decade),
        None => geometric_times(1e-2, 1e4, 4),
    };
    let rep = pointwise_envelope_check(&p, &cfg.data_for(&p)?, &times, &q)?;
    let mut t = Table::new(&["r", "key", "rate_ratio"]);
    let mut lo = f64::INFINITY;
    for &r in q.nodes.iter().step_by(q.per_panel) {
        let key = key_function(&p, r);
        let ratio = -raw_eigen(&p, r)?.max_real() / key;
        lo = lo.min(ratio);
        t.push(vec![r.into(), key.into(), ratio.into()]);
    }
    let case = label(&p);
    let checks = vec![
        Check::above(0, case.clone(), "envelope_rate_c", rep.c, 0.0),
        Check::in_range(0, case.clone(), "envelope_constant_refined_ratio", rep.big_c_refined / rep.big_c, 0.95, 1.05),
        Check::in_range(0, case, "min_rate_ratio", lo, tol.key_ratio.0, tol.key_ratio.1),
    ];
    Ok(Output::new(
        "pointwise",
        t,
        |s, h| plot_script(s, "key function and rate ratio", Axes::LogLog, "r", "value", h, &[(1, 2), (1, 3)]),
        checks,
    ))
}

/// Systems of the envelope sweep: `(sigma, alpha, damped)`.
pub const ENVELOPE_CASES: [(f64, f64, bool); 6] =
    [(1.0, 0.0, false), (1.0, 0.2, false), (2.0, 0.0, false), (2.0, 0.2, false), (1.0, 0.0, true), (2.0, 0.0, true)];
pub const ENVELOPE_NODES: [f64; 2] = [1e2, 1e3];

/// Per-node exponential rates at large frequencies and their scaling in `r`.
pub fn envelope_sweep(_cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut t = Table::new(&["sigma", "alpha", "damped", "r", "key", "rate"]);
    let mut checks = Vec::new();
    let g = default_weights();
    for (sigma, alpha, damped) in ENVELOPE_CASES {
        let p = SystemParams::new(sigma, alpha, damped, 1)?;
        let mut rates = Vec::new();
        for r in ENVELOPE_NODES {
            let key = key_function(&p, r);
            let times: Vec<f64> = (0..=20).map(|i| (1.0 + 9.0 * i as f64 / 20.0) / key).collect();
            let rate = node_decay_rate(&p, r, &g, &times)?;
            t.push(vec![sigma.into(), alpha.into(), damped.into(), r.into(), key.into(), rate.into()]);
            rates.push(rate);
        }
        let slope = loglog_slope(&ENVELOPE_NODES, &rates);
        let want = if damped { 0.0 } else { -2.0 * sigma * (1.0 - 3.0 * alpha) };
        checks.push(Check::within(7, label(&p), "rate_slope_in_r", slope, want, tol.envelope_slope));
    }
    Ok(Output::new("pointwise", t, |s, h| plot_script(s, "node decay rates", Axes::LogLog, "r", "rate", h, &[(4, 6)]), checks))
}

// ---------------------------------------------------------------- profile

fn get(m: &std::collections::BTreeMap<&'static str, f64>, k: &str) -> f64 {
    m.get(k).copied().unwrap_or(f64::NAN)
}

/// Refinement norm series and small-zone improvement for the configured run.
pub fn profile_single(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let p = cfg.params;
    let q = cfg.quadrature()?;
    let window = cfg.window_or((1e3, 1e5));
    let times = cfg.times_or(window);
    let rf = Refinement::new(&p, &cfg.data_for(&p)?, &q, &cfg.zones)?;
    let keys = [SMALL_SOLUTION, SMALL_DIFFERENCE, LARGE_SOLUTION, LARGE_DIFFERENCE, COMBINED_DIFFERENCE];
    let mut header = vec!["t"];
    header.extend(keys);
    let mut t = Table::new(&header);
    for &time in &times {
        let m = rf.norms(time, cfg.s0, &q)?;
        let mut row = vec![Cell::Num(time)];
        row.extend(keys.iter().map(|k| Cell::Num(get(&m, k))));
        t.push(row);
    }
    let f0 = fit_improvement(&rf, Zone::Small, cfg.s0, &times, window, &q)?;
    let f1 = fit_improvement(&rf, Zone::Small, cfg.s0, &times, shifted(window), &q)?;
    let imp = improvement_exponent(&p)?;
    let case = format!("{} s0={}", label(&p), cfg.s0);
    let checks = vec![
        Check::at_most(0, case.clone(), "slope_gain", f0.gain(), -imp + tol.improvement_slack),
        Check::at_most(0, case, "difference_slope_shift", (f1.difference.slope - f0.difference.slope).abs(), tol.fit_shift),
    ];
    Ok(Output::new(
        "profile",
        t,
        |s, h| plot_script(s, "solution and refinement norms", Axes::LogLog, "t", "norm", h, &[(1, 2), (1, 3)]),
        checks,
    ))
}

/// `alpha` of the improvement sweep; each runs undamped and damped with `sigma = 1`.
pub const IMPROVEMENT_ALPHAS: [f64; 3] = [0.0, 0.4, 0.75];

/// Slope gain of the small-zone difference over the solution.
pub fn improvement_sweep(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let q = cfg.quadrature()?;
    let window = cfg.window_or((1e3, 1e5));
    let times = cfg.times_or(window);
    let mut t =
        Table::new(&["alpha", "damped", "family", "improvement", "solution_slope", "difference_slope", "gain", "gain_shifted"]);
    let mut checks = Vec::new();
    for damped in [false, true] {
        for alpha in IMPROVEMENT_ALPHAS {
            let p = SystemParams::new(1.0, alpha, damped, 1)?;
            let imp = improvement_exponent(&p)?;
            for family in ["gaussian", "moment_free"] {
                let data = if family == "gaussian" {
                    InitialData::gaussian(1.0, default_weights(), 1)?
                } else {
                    InitialData::moment_free(1.0, default_weights(), 1)?
                };
                let rf = Refinement::new(&p, &data, &q, &cfg.zones)?;
                let f0 = fit_improvement(&rf, Zone::Small, 0.0, &times, window, &q)?;
                let f1 = fit_improvement(&rf, Zone::Small, 0.0, &times, shifted(window), &q)?;
                t.push(vec![
                    alpha.into(),
                    damped.into(),
                    family.into(),
                    imp.into(),
                    f0.solution.slope.into(),
                    f0.difference.slope.into(),
                    f0.gain().into(),
                    f1.gain().into(),
                ]);
                let case = format!("{} {family}", label(&p));
                checks.push(Check::at_most(8, case.clone(), "slope_gain", f0.gain(), -imp + tol.improvement_slack));
                checks.push(Check::at_most(
                    8,
                    case.clone(),
                    "solution_slope_shift",
                    (f1.solution.slope - f0.solution.slope).abs(),
                    tol.fit_shift,
                ));
                checks.push(Check::at_most(
                    8,
                    case,
                    "difference_slope_shift",
                    (f1.difference.slope - f0.difference.slope).abs(),
                    tol.fit_shift,
                ));
            }
        }
    }
    Ok(Output::new("profile", t, |s, h| plot_script(s, "slope gain", Axes::Linear, "alpha", "gain", h, &[(1, 7)]), checks))
}

// ---------------------------------------------------------------- mgt

/// Conserved MGT energy for Gaussian `u0` over `t` in `[0, 100]`.
pub fn mgt(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let q = cfg.quadrature()?;
    let data = MgtData::gaussian();
    let times: Vec<f64> = match cfg.times {
        Some((a, b)) => (0..=200).map(|k| a + (b - a) * k as f64 / 200.0).collect(),
        None => (0..=200).map(|k| k as f64 / 2.0).collect(),
    };
    let e0 = mgt_energy(&data, 0.0, &q)?;
    let mut t = Table::new(&["t", "energy", "relative_drift"]);
    let mut worst: f64 = 0.0;
    for &time in &times {
        let e = mgt_energy(&data, time, &q)?;
        let d = (e - e0).abs() / e0;
        worst = worst.max(d);
        t.push(vec![time.into(), e.into(), d.into()]);
    }
    let checks = vec![Check::at_most(9, "gaussian u0, n=1", "max_relative_drift", worst, tol.mgt_drift)];
    Ok(Output::new("mgt", t, |s, h| plot_script(s, "MGT energy drift", Axes::LogY, "t", "drift", h, &[(1, 3)]), checks))
}

// ---------------------------------------------------------------- hygiene

/// Systems checked for semigroup and refinement stability: `(sigma, alpha)`, both systems each.
pub const HYGIENE_CASES: [(f64, f64); 4] = [(1.0, 0.0), (1.0, 0.4), (1.0, 0.75), (2.0, 0.5)];
pub const REFINEMENT_TIMES: [f64; 7] = [0.0, 0.5, 3.0, 10.0, 100.0, 1e3, 1e4];

/// Largest nodewise relative gap between `state(t) advanced by dt` and `state(t + dt)`.
pub fn semigroup_error(ev: &Evolution, times: &[f64], dt: f64) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for &t in times {
        let two = ev.advance(&ev.state(t)?, dt)?;
        let one = ev.state(t + dt)?;
        for (a, b) in two.amplitudes.iter().zip(&one.amplitudes) {
            let n = vec_norm(b);
            if n > 1e-280 {
                worst = worst.max(vec_norm(&vec_sub(a, b)) / n);
            }
        }
    }
    Ok(worst)
}

/// Largest relative change of the full and small-zone norms when the nodes per panel double.
pub fn refinement_error(p: &SystemParams, data: &InitialData, cfg: &RunConfig, q: &RadialQuadrature) -> CliResult<f64> {
    let qr = q.refined();
    let (a, b) = (Evolution::new(p, data, q)?, Evolution::new(p, data, &qr)?);
    let mut worst: f64 = 0.0;
    for t in REFINEMENT_TIMES {
        let (sa, sb) = (a.state(t)?, b.state(t)?);
        for z in [None, Some((Zone::Small, &cfg.zones))] {
            let x = sobolev_norm(&sa, 0.0, z, q)?;
            let y = sobolev_norm(&sb, 0.0, z, &qr)?;
            worst = worst.max((x / y - 1.0).abs());
        }
    }
    Ok(worst)
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

/// Semigroup, quadrature refinement and thread-count independence.
pub fn hygiene(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let q = cfg.quadrature()?;
    let mut t = Table::new(&["case", "quantity", "value"]);
    let mut checks = Vec::new();
    let data = InitialData::gaussian(1.0, default_weights(), 1)?;
    for (sigma, alpha) in HYGIENE_CASES {
        for damped in [false, true] {
            let p = SystemParams::new(sigma, alpha, damped, 1)?;
            let ev = Evolution::new(&p, &data, &q)?;
            let semi = semigroup_error(&ev, &[0.0, 1.0, 10.0, 100.0, 1e3], 7.0)?;
            let refine = refinement_error(&p, &data, cfg, &q)?;
            t.push(vec![label(&p).into(), "semigroup".into(), semi.into()]);
            t.push(vec![label(&p).into(), "refinement".into(), refine.into()]);
            checks.push(Check::at_most(10, label(&p), "semigroup", semi, tol.semigroup));
            checks.push(Check::at_most(10, label(&p), "refinement", refine, tol.refinement));
        }
    }
    let mut base = RunConfig::build(&[("preset".into(), "plate".into())], &[])?;
    base.grid = cfg.grid;
    base.zones = cfg.zones;
    let render = |threads: usize| -> CliResult<String> {
        in_pool(threads, || -> CliResult<String> {
            let a = decay_single(&base, tol)?;
            let b = pointwise_single(&base, tol)?;
            Ok(a.table.to_csv() + &b.table.to_csv())
        })
    };
    let (one, four) = (render(1)?, render(4)?);
    let differ = if one == four { 0.0 } else { 1.0 };
    t.push(vec!["plate decay and pointwise csv".into(), "bytes_differ_1_vs_4_threads".into(), differ.into()]);
    checks.push(Check::at_most(10, "plate decay and pointwise csv, 1 vs 4 threads", "bytes_differ", differ, 0.0));
    Ok(Output::new("hygiene", t, |s, h| plot_script(s, "numerical hygiene", Axes::LogY, "row", "value", h, &[(0, 3)]), checks))
}
