//! Fourier symbols of the first-order systems and their characteristic cubics.

use crate::error::{Error, Result};
use crate::mat3::{c, ComplexMat3, C64, I, ZERO};
use crate::params::SystemParams;

pub use crate::mat3::ComplexMat3 as FrequencySymbol;

pub fn b0() -> ComplexMat3 {
    ComplexMat3::diag([I, -I, ZERO])
}

pub fn b1() -> ComplexMat3 {
    ComplexMat3::from_real([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [-0.5, -0.5, -1.0]])
}

pub fn d0() -> ComplexMat3 {
    ComplexMat3::new([[c(-0.5, 1.0), c(-0.5, 0.0), ZERO], [c(-0.5, 0.0), c(-0.5, -1.0), ZERO], [ZERO, ZERO, ZERO]])
}

pub fn d1() -> ComplexMat3 {
    b1()
}

fn check_r(r: f64) -> Result<()> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeFrequency(r));
    }
    Ok(())
}

/// `B0 r^sigma + B1 r^(2 sigma alpha)` or the damped analogue with `D0`, `D1`.
pub fn assemble(p: &SystemParams, r: f64) -> Result<ComplexMat3> {
    check_r(r)?;
    let lead = if p.damped { d0() } else { b0() };
    Ok(lead.scale_re(r.powf(p.sigma)) + b1().scale_re(r.powf(2.0 * p.sigma * p.alpha)))
}

/// Coefficients of `l^3 + c2 l^2 + c1 l + c0`.
///
/// `hurwitz` holds `c1 c2 - c0`, evaluated without cancellation when a closed
/// form is known. It fixes the real part of the complex pair to full relative
/// accuracy when that real part is tiny.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicCoeffs {
    pub c2: C64,
    pub c1: C64,
    pub c0: C64,
    pub hurwitz: C64,
}

impl CubicCoeffs {
    pub fn new(c2: C64, c1: C64, c0: C64) -> Self {
        Self { c2, c1, c0, hurwitz: c1 * c2 - c0 }
    }

    /// Characteristic cubic `det(l I - A)` from trace, minors and determinant.
    pub fn of_matrix(a: &ComplexMat3) -> Self {
        Self::new(-a.trace(), a.minor_sum(), -a.det())
    }

    pub fn eval(&self, l: C64) -> C64 {
        ((l + self.c2) * l + self.c1) * l + self.c0
    }

    pub fn eval_derivative(&self, l: C64) -> C64 {
        (l * 3.0 + self.c2 * 2.0) * l + self.c1
    }

    pub fn is_real(&self) -> bool {
        let scale = self.c2.norm().max(self.c1.norm()).max(self.c0.norm()).max(f64::MIN_POSITIVE);
        let tol = 1e-14 * scale;
        [self.c2, self.c1, self.c0].iter().all(|x| x.im.abs() <= tol.max(1e-14 * x.re.abs()))
    }
}

pub fn char_poly(p: &SystemParams, r: f64) -> Result<CubicCoeffs> {
    check_r(r)?;
    if p.damped {
        return Ok(CubicCoeffs::of_matrix(&assemble(p, r)?));
    }
    let (s, a) = (p.sigma, p.alpha);
    let re = |x: f64| c(x, 0.0);
    let c2 = r.powf(2.0 * s * a);
    let c1 = r.powf(2.0 * s) + r.powf(4.0 * s * a);
    let c0 = r.powf(2.0 * s + 2.0 * s * a);
    Ok(CubicCoeffs { c2: re(c2), c1: re(c1), c0: re(c0), hurwitz: re(r.powf(6.0 * s * a)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_zero_at_origin_is_b1() {
        let p = SystemParams::undamped(1.5, 0.0);
        assert_eq!(assemble(&p, 0.0).unwrap(), b1());
    }

    #[test]
    fn half_at_unit_frequency_entries() {
        let p = SystemParams::undamped(1.0, 0.5);
        let b = assemble(&p, 1.0).unwrap();
        assert_eq!(b.m[2][2], c(-1.0, 0.0));
        assert_eq!(b.m[0][0], c(0.0, 1.0));
        let d = assemble(&SystemParams::damped(1.0, 0.5), 1.0).unwrap();
        assert_eq!(d.trace(), c(-2.0, 0.0));
    }

    #[test]
    fn closed_form_values() {
        let k = char_poly(&SystemParams::undamped(1.0, 0.5), 1.0).unwrap();
        assert_eq!((k.c2.re, k.c1.re, k.c0.re), (1.0, 2.0, 1.0));
        let k = char_poly(&SystemParams::undamped(1.0, 0.0), 2.0).unwrap();
        assert_eq!((k.c2.re, k.c1.re, k.c0.re), (1.0, 5.0, 4.0));
        assert_eq!(k.hurwitz.re, k.c1.re * k.c2.re - k.c0.re);
    }

    #[test]
    fn origin_with_positive_alpha_vanishes() {
        for damped in [false, true] {
            let p = SystemParams::new(2.0, 0.3, damped, 1).unwrap();
            let k = char_poly(&p, 0.0).unwrap();
            assert_eq!((k.c2, k.c1, k.c0), (ZERO, ZERO, ZERO));
        }
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(assemble(&SystemParams::undamped(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn damped_polynomial_is_real() {
        let p = SystemParams::damped(1.3, 0.7);
        for r in [1e-3, 0.5, 7.0, 1e3] {
            assert!(char_poly(&p, r).unwrap().is_real());
        }
    }
}
