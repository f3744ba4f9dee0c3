//! Diagonalizer matrices of the two cascades, their zone products and the
//! cancellation identities each step relies on.

use std::collections::BTreeMap;

use crate::eigen::ExpansionFamily;
use crate::error::{Error, Result};
use crate::mat3::{c, ComplexMat3, C64, I, ONE, ZERO};
use crate::params::{SystemParams, Zone};
use crate::symbol::{assemble, b0, b1};

const S3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepMatrix {
    N1,
    N2,
    N3,
    N4,
    N5,
    N6,
    M1,
    M2,
    M3,
    M4,
    M5,
}

fn re(x: f64) -> C64 {
    c(x, 0.0)
}

/// `(i sqrt3 - 1) / 2`
fn w_plus() -> C64 {
    c(-0.5, S3 / 2.0)
}

fn n1() -> ComplexMat3 {
    ComplexMat3::new([[re(-1.0), w_plus(), w_plus().conj()], [re(1.0), w_plus(), w_plus().conj()], [ZERO, ONE, ONE]])
}

impl StepMatrix {
    /// The r-independent factor.
    pub fn constant(&self) -> ComplexMat3 {
        let u = c(1.0, S3); // 1 + i sqrt3
        let s3 = re(S3);
        match self {
            Self::N1 | Self::M1 => n1(),
            Self::N2 => ComplexMat3::new([
                [ZERO, -(s3 + I) / u, (-s3 + I) / (-u.conj())],
                [-(s3 * 2.0) / (u * 3.0), ZERO, ZERO],
                [(s3 * 2.0) / (u.conj() * 3.0), ZERO, ZERO],
            ]),
            Self::N3 => ComplexMat3::new([[ZERO, ZERO, ZERO], [ZERO, ZERO, c(-1.0, S3) / 6.0], [ZERO, -u / 6.0, ZERO]]),
            Self::N4 => ComplexMat3::new([[ZERO, ZERO, I], [ZERO, ZERO, -I], [I / 2.0, -I / 2.0, ZERO]]),
            Self::N5 => ComplexMat3::from_real([[0.0, 0.25, -1.0], [0.25, 0.0, -1.0], [-0.5, -0.5, 0.0]]),
            Self::N6 => ComplexMat3::new([[ZERO, I / 4.0, -I], [-I / 4.0, ZERO, I], [-I / 2.0, I / 2.0, ZERO]]),
            Self::M2 => ComplexMat3::new([
                [ZERO, -(s3 + I) / u, (s3 - I) / u.conj()],
                [-(s3 * 2.0) / (u * 3.0), ZERO, (s3 - I) / (I * 6.0)],
                [(s3 * 2.0) / (u.conj() * 3.0), -(s3 + I) / (I * 6.0), ZERO],
            ]),
            Self::M3 => ComplexMat3::new([
                [ZERO, (s3 + I) * 2.0 / (u * 3.0), (I - s3) * 2.0 / (u.conj() * 3.0)],
                [(s3 * 2.0) / (u * 3.0), ZERO, -(s3 * 2.0 + I) / (I * 9.0)],
                [-(s3 * 2.0) / (u.conj() * 3.0), (s3 * 2.0 - I) / (I * 9.0), ZERO],
            ]),
            Self::M4 => ComplexMat3::new([[ZERO, c(0.0, S3 - 2.0), c(0.0, -(S3 + 2.0))], [ZERO, ONE, ONE], [ONE, ZERO, ZERO]]),
            Self::M5 => ComplexMat3::new([
                [ZERO, (c(0.0, S3 - 2.0) + 1.0) / c(1.0, S3), (c(0.0, S3 + 2.0) - 1.0) / c(-1.0, S3)],
                [(c(2.0, -1.0) * S3 + 3.0) / (u * 3.0), ZERO, ZERO],
                [(c(-2.0, 1.0) * S3 + 3.0) / (u.conj() * 3.0), ZERO, ZERO],
            ]),
        }
    }

    /// Exponent of the scalar factor `r^e` multiplying the constant part.
    ///
    /// `M3` and `M5` carry `2 sigma - 4 sigma alpha` and `2 sigma alpha - sigma`;
    /// these are the powers for which the cascade removes the off-diagonal terms
    /// order by order (see [`printed_prefactor_exponent`]).
    pub fn prefactor_exponent(&self, p: &SystemParams) -> f64 {
        let (s, a) = (p.sigma, p.alpha);
        match self {
            Self::N1 | Self::M1 | Self::M4 => 0.0,
            Self::N2 | Self::M2 => s - 2.0 * s * a,
            Self::N3 | Self::M3 => 2.0 * s - 4.0 * s * a,
            Self::N4 | Self::M5 => 2.0 * s * a - s,
            Self::N5 => 4.0 * s * a - 2.0 * s,
            Self::N6 => 6.0 * s * a - 3.0 * s,
        }
    }
}

/// Prefactor exponents as typeset for `M3` and `M5` (`2 sigma - 2 sigma alpha`
/// and `2 sigma alpha`); other matrices agree with [`StepMatrix::prefactor_exponent`].
pub fn printed_prefactor_exponent(which: StepMatrix, p: &SystemParams) -> f64 {
    let (s, a) = (p.sigma, p.alpha);
    match which {
        StepMatrix::M3 => 2.0 * s - 2.0 * s * a,
        StepMatrix::M5 => 2.0 * s * a,
        other => other.prefactor_exponent(p),
    }
}

pub fn step_matrix(which: StepMatrix, p: &SystemParams, r: f64) -> ComplexMat3 {
    let e = which.prefactor_exponent(p);
    if e == 0.0 {
        which.constant()
    } else {
        which.constant().scale_re(r.powf(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalizerProduct {
    pub value: ComplexMat3,
    pub zone: Zone,
    pub cascade: ExpansionFamily,
}

fn ip(m: ComplexMat3) -> ComplexMat3 {
    ComplexMat3::identity() + m
}

pub fn zone_diagonalizer(p: &SystemParams, zone: Zone, r: f64) -> Result<DiagonalizerProduct> {
    if r < 0.0 {
        return Err(Error::NegativeFrequency(r));
    }
    let cascade = ExpansionFamily::select(p, zone)?;
    let st = |w| step_matrix(w, p, r);
    use StepMatrix::*;
    let value = match cascade {
        ExpansionFamily::UndampedN1 => n1() * ip(st(N2)) * ip(st(N3)),
        ExpansionFamily::UndampedN4 => ip(st(N4)) * ip(st(N5)) * ip(st(N6)),
        ExpansionFamily::DampedM1 => n1() * ip(st(M2)) * ip(st(M3)),
        ExpansionFamily::DampedM4 => StepMatrix::M4.constant() * ip(st(M5)),
    };
    Ok(DiagonalizerProduct { value, zone, cascade })
}

/// Max entry of the off-diagonal part of `P^-1 A P`.
pub fn similarity_residual(p: &SystemParams, zone: Zone, r: f64) -> Result<f64> {
    let d = zone_diagonalizer(p, zone, r)?;
    let inv = d.value.inverse().ok_or_else(|| Error::Regime("singular diagonalizer".into()))?;
    Ok((inv * assemble(p, r)? * d.value).off_diagonal().max_abs())
}

/// Names of the six step identities.
pub const IDENTITY_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Normalized max-entry residuals of the six step identities at `r`.
///
/// Each residual is divided by the common power of `r` carried by its terms.
pub fn verify_step_identities(p: &SystemParams, r: f64) -> Result<BTreeMap<&'static str, f64>> {
    if !(r > 0.0) {
        return Err(Error::InvalidParams("identities need r > 0".into()));
    }
    if p.is_half() {
        return Err(Error::Regime("identities are stated for alpha != 1/2".into()));
    }
    let (s, a) = (p.sigma, p.alpha);
    let pw = |e: f64| r.powf(e);
    let ninv = n1().inverse().expect("N1 invertible");
    let st = |w| step_matrix(w, p, r);
    let diag = |d: [C64; 3], e: f64| ComplexMat3::diag(d).scale_re(pw(e));
    let com = ComplexMat3::commutator;
    let mut out = BTreeMap::new();

    let lam1 = diag([ZERO, -c(0.5, S3 / 2.0), -c(0.5, -S3 / 2.0)], 2.0 * s * a);
    let ea = ninv * b1() * n1() * pw(2.0 * s * a) - lam1;
    out.insert("a", ea.max_abs() / pw(2.0 * s * a));

    let amat = ninv * b0() * n1() * pw(s);
    let eb = amat - com(&st(StepMatrix::N2), &lam1);
    out.insert("b", eb.max_abs() / pw(s));

    let lam2 = diag([re(-1.0), c(0.5, -S3 / 6.0), c(0.5, S3 / 6.0)], 2.0 * s - 2.0 * s * a);
    let ec = amat * st(StepMatrix::N2) - com(&st(StepMatrix::N3), &lam1) - lam2;
    out.insert("c", ec.max_abs() / pw(2.0 * s - 2.0 * s * a));

    // Second cascade: the leading diagonal is B0 r^sigma itself.
    let lead = b0().scale_re(pw(s));
    let n4 = st(StepMatrix::N4);
    let n5 = st(StepMatrix::N5);
    let lam2b = diag([ZERO, ZERO, re(-1.0)], 2.0 * s * a);
    let ed = b1().scale_re(pw(2.0 * s * a)) - com(&n4, &lead) - lam2b;
    out.insert("d", ed.max_abs() / pw(2.0 * s * a));

    let b2 = -(n4 * lam2b) + b1() * n4 * pw(2.0 * s * a);
    let lam3 = diag([I / 2.0, -I / 2.0, ZERO], 4.0 * s * a - s);
    let ee = b2 - com(&n5, &lead) - lam3;
    out.insert("e", ee.max_abs() / pw(4.0 * s * a - s));

    let b3 = -(n4 * b2) + com(&lam2b, &n5);
    let lam4 = diag([re(-0.5), re(-0.5), re(1.0)], 6.0 * s * a - 2.0 * s);
    let ef = b3 - com(&st(StepMatrix::N6), &lead) - lam4;
    out.insert("f", ef.max_abs() / pw(6.0 * s * a - 2.0 * s));
    Ok(out)
}
