//! Roots of monic cubics.
//!
//! Real coefficients go through the depressed cubic (Cardano for one real root,
//! trigonometric form for three), followed by Newton polishing. The remaining
//! pair comes from the shifted variable `d = l_real + c2`, whose cubic has
//! constant term `c1 c2 - c0`; this recovers real parts many orders of
//! magnitude below the imaginary parts. Complex coefficients use the general
//! Cardano formula with Newton polishing.

use std::f64::consts::PI;

use crate::mat3::{c, C64, ZERO};
use crate::symbol::CubicCoeffs;

const NEWTON_STEPS: usize = 6;

pub fn solve(k: &CubicCoeffs) -> [C64; 3] {
    if k.is_real() {
        real_roots(k.c2.re, k.c1.re, k.c0.re, k.hurwitz.re)
    } else {
        complex_roots(k)
    }
}

fn newton_real(mut x: f64, f: impl Fn(f64) -> (f64, f64)) -> f64 {
    let (mut fx, _) = f(x);
    for _ in 0..NEWTON_STEPS {
        let (v, dv) = f(x);
        if v == 0.0 || dv == 0.0 || !dv.is_finite() {
            break;
        }
        let next = x - v / dv;
        let (fn_, _) = f(next);
        if !(fn_.abs() <= fx.abs()) {
            break;
        }
        let done = (next - x).abs() <= 1e-17 * next.abs();
        x = next;
        fx = fn_;
        if done {
            break;
        }
    }
    x
}

/// One real root of `t^3 + p t + q`, the one of largest modulus when all three are real.
fn depressed_real_root(p: f64, q: f64) -> f64 {
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let u = (-q / 2.0 - q.signum() * disc.sqrt()).cbrt();
        if u == 0.0 {
            return 0.0;
        }
        let v = -p / (3.0 * u);
        let den = u * u + v * v + p / 3.0;
        if den != 0.0 {
            -q / den
        } else {
            u + v
        }
    } else if p == 0.0 {
        0.0
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|j| m * (theta - 2.0 * PI * j as f64 / 3.0).cos())
            .fold(0.0, |best: f64, t| if t.abs() > best.abs() { t } else { best })
    }
}

fn real_roots(a: f64, b: f64, cc: f64, hurwitz: f64) -> [C64; 3] {
    if a == 0.0 && b == 0.0 && cc == 0.0 {
        return [ZERO; 3];
    }
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
    let t = depressed_real_root(p, q);
    let f = |x: f64| (((x + a) * x + b) * x + cc, (3.0 * x + 2.0 * a) * x + b);
    let lr = newton_real(t - a / 3.0, f);

    // g(d) = f(d - a) = d^3 - 2a d^2 + (a^2 + b) d - hurwitz
    let g = |d: f64| (((d - 2.0 * a) * d + a * a + b) * d - hurwitz, (3.0 * d - 4.0 * a) * d + a * a + b);
    let d = newton_real(lr + a, g);

    let prod = if lr != 0.0 { -cc / lr } else { b };
    let disc = prod - d * d / 4.0;
    if disc >= 0.0 {
        let im = disc.sqrt();
        [c(lr, 0.0), c(-d / 2.0, im), c(-d / 2.0, -im)]
    } else {
        let s = (-disc).sqrt();
        let q1 = -(d / 2.0 + if d >= 0.0 { s } else { -s });
        let q2 = if q1 != 0.0 { prod / q1 } else { 0.0 };
        [c(lr, 0.0), c(q1, 0.0), c(q2, 0.0)]
    }
}

fn complex_roots(k: &CubicCoeffs) -> [C64; 3] {
    let (a, b, cc) = (k.c2, k.c1, k.c0);
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + cc;
    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let w1 = -q / 2.0 + s;
    let w2 = -q / 2.0 - s;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [ZERO; 3];
    if w.norm() == 0.0 {
        out = [-a / 3.0; 3];
    } else {
        let u = w.powf(1.0 / 3.0);
        let mut wk = u;
        for o in out.iter_mut() {
            *o = wk - p / (wk * 3.0) - a / 3.0;
            wk *= omega;
        }
    }
    for x in out.iter_mut() {
        for _ in 0..NEWTON_STEPS {
            let dv = k.eval_derivative(*x);
            if dv.norm() == 0.0 {
                break;
            }
            let next = *x - k.eval(*x) / dv;
            if !(k.eval(next).norm() < k.eval(*x).norm()) {
                break;
            }
            *x = next;
        }
    }
    out
}
