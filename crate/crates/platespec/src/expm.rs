//! Matrix exponential by scaling and squaring with the degree-13 Pade approximant.

use crate::mat3::ComplexMat3;

const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

pub fn expm(a: &ComplexMat3) -> ComplexMat3 {
    let norm = a.norm1();
    if norm == 0.0 {
        return ComplexMat3::identity();
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale_re(0.5f64.powi(s));
    let id = ComplexMat3::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u = a * (a6 * (a6 * B[13] + a4 * B[11] + a2 * B[9]) + a6 * B[7] + a4 * B[5] + a2 * B[3] + id * B[1]);
    let v = a6 * (a6 * B[12] + a4 * B[10] + a2 * B[8]) + a6 * B[6] + a4 * B[4] + a2 * B[2] + id * B[0];
    let mut r = (v - u).inverse().expect("Pade denominator is invertible") * (v + u);
    for _ in 0..s {
        r = r * r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::c;

    #[test]
    fn diagonal_exponential() {
        let d = ComplexMat3::diag([c(-1.0, 2.0), c(0.5, 0.0), c(0.0, -3.0)]);
        let e = expm(&d);
        for k in 0..3 {
            assert!((e.m[k][k] - d.m[k][k].exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn jordan_block() {
        // exp([[l, 1], [0, l]]) = e^l [[1, 1], [0, 1]]
        let l = c(-2.0, 1.0);
        let mut a = ComplexMat3::diag([l, l, c(0.0, 0.0)]);
        a.m[0][1] = c(1.0, 0.0);
        let e = expm(&a.scale_re(3.0));
        let el = (l * 3.0).exp();
        assert!((e.m[0][0] - el).norm() < 1e-14);
        assert!((e.m[0][1] - el * 3.0).norm() < 1e-14);
        assert!((e.m[2][2] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn large_norm_uses_squaring() {
        let a = ComplexMat3::diag([c(0.0, 40.0), c(-30.0, 0.0), c(0.1, 0.0)]);
        let e = expm(&a);
        assert!((e.m[0][0] - c(0.0, 40.0).exp()).norm() < 1e-12);
        assert!((e.m[2][2].re - 0.1f64.exp()).abs() < 1e-13);
    }
}
