//! Dense 3x3 complex matrices and 3-vectors.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;
pub type Vec3 = [C64; 3];

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major 3x3 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat3 {
    pub m: [[C64; 3]; 3],
}

impl ComplexMat3 {
    pub const fn new(m: [[C64; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self { m: [[ZERO; 3]; 3] }
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 3])
    }

    pub fn diag(d: Vec3) -> Self {
        let mut out = Self::zero();
        for (k, v) in d.into_iter().enumerate() {
            out.m[k][k] = v;
        }
        out
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = c(rows[i][j], 0.0);
            }
        }
        out
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut out = Self::zero();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                out.m[i][j] = col[i];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Sum of the three principal 2x2 minors.
    pub fn minor_sum(&self) -> C64 {
        let m = &self.m;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    pub fn det(&self) -> C64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn adjugate(&self) -> Self {
        let m = &self.m;
        let cof = |i0: usize, i1: usize, j0: usize, j1: usize| m[i0][j0] * m[i1][j1] - m[i0][j1] * m[i1][j0];
        Self::new([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ])
    }

    /// Inverse via adjugate and determinant; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `[a, b] = ab - ba`
    pub fn commutator(a: &Self, b: &Self) -> Self {
        *a * *b - *b * *a
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn off_diagonal(&self) -> Self {
        let mut out = *self;
        for k in 0..3 {
            out.m[k][k] = ZERO;
        }
        out
    }

    pub fn diagonal(&self) -> Vec3 {
        [self.m[0][0], self.m[1][1], self.m[2][2]]
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..3).map(|j| (0..3).map(|i| self.m[i][j].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }
}

impl Add for ComplexMat3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for ComplexMat3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMat3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl Mul for ComplexMat3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j] + self.m[i][2] * rhs.m[2][j];
            }
        }
        out
    }
}

impl Mul<f64> for ComplexMat3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_re(rhs)
    }
}

pub fn vec_norm(v: &Vec3) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

pub fn vec_sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn vec_scale(v: &Vec3, s: C64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Bilinear cross product; orthogonal (without conjugation) to both inputs.
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexMat3 {
        ComplexMat3::new([
            [c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5)],
            [c(-2.0, 0.0), c(0.5, 0.5), c(1.0, 1.0)],
            [c(0.0, 1.0), c(2.0, -3.0), c(-1.0, 0.0)],
        ])
    }

    #[test]
    fn inverse_roundtrip() {
        let a = sample();
        let e = a * a.inverse().unwrap() - ComplexMat3::identity();
        assert!(e.max_abs() < 1e-14);
    }

    #[test]
    fn det_matches_product_of_diagonal() {
        let d = ComplexMat3::diag([c(2.0, 0.0), c(0.0, 3.0), c(-1.0, 1.0)]);
        assert_eq!(d.det(), c(2.0, 0.0) * c(0.0, 3.0) * c(-1.0, 1.0));
    }

    #[test]
    fn singular_has_no_inverse() {
        let z = ComplexMat3::from_real([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]);
        assert!(z.inverse().is_none());
    }

    #[test]
    fn cross_is_orthogonal() {
        let a = [c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)];
        let b = [c(0.0, 3.0), c(-1.0, 0.5), c(2.0, 2.0)];
        let x = cross(&a, &b);
        let dot = |u: &Vec3, v: &Vec3| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        assert!(dot(&a, &x).norm() < 1e-14);
        assert!(dot(&b, &x).norm() < 1e-14);
    }
}
