//! Eigenvalues and eigenvectors of the symbols: exact roots, the closed forms
//! at `alpha = 1/2`, asymptotic expansions, and continuation across sweeps.

use crate::cubic;
use crate::error::{Error, Result};
use crate::mat3::{c, cross, vec_norm, vec_scale, ComplexMat3, Vec3, C64, ZERO};
use crate::params::{SystemParams, Zone, ZonePartition};
use crate::symbol::{assemble, char_poly};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Relative eigenvalue gap below which the eigenbasis is treated as defective.
pub const COALESCENCE_TOL: f64 = 1e-8;

/// Three labeled branches `j = 1, 2, 3` at one frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenBranches {
    pub lambda: [C64; 3],
    /// Unit-norm eigenvectors as columns, in the order of `lambda`.
    pub vectors: ComplexMat3,
    pub defect: bool,
}

impl EigenBranches {
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let lambda = [self.lambda[perm[0]], self.lambda[perm[1]], self.lambda[perm[2]]];
        let vectors =
            ComplexMat3::from_columns([self.vectors.column(perm[0]), self.vectors.column(perm[1]), self.vectors.column(perm[2])]);
        Self { lambda, vectors, defect: self.defect }
    }

    pub fn max_real(&self) -> f64 {
        self.lambda.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `V diag(lambda) V^-1`, `None` if `V` is singular.
    pub fn reconstruct(&self) -> Option<ComplexMat3> {
        let vi = self.vectors.inverse()?;
        Some(self.vectors * ComplexMat3::diag(self.lambda) * vi)
    }
}

/// Unit null vector of `a - l I`, from the largest cross product of two rows.
pub fn null_vector(a: &ComplexMat3, l: C64, fallback: usize) -> Vec3 {
    let mut s = *a;
    for k in 0..3 {
        s.m[k][k] -= l;
    }
    let rows = s.m;
    let candidates = [cross(&rows[0], &rows[1]), cross(&rows[0], &rows[2]), cross(&rows[1], &rows[2])];
    let best = candidates.iter().max_by(|x, y| vec_norm(x).total_cmp(&vec_norm(y))).copied().unwrap_or([ZERO; 3]);
    let nb = vec_norm(&best);
    let scale = s.max_abs();
    if !(nb > 1e-300) || nb <= 1e-28 * scale * scale {
        let mut e = [ZERO; 3];
        e[fallback] = c(1.0, 0.0);
        return e;
    }
    // Phase fixed by making the largest entry real and positive.
    let big = best.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
    vec_scale(&best, big.conj() / (big.norm() * nb))
}

fn is_defective(lambda: &[C64; 3]) -> bool {
    let scale = lambda.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return true;
    }
    let gap = [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| (lambda[i] - lambda[j]).norm()).fold(f64::INFINITY, f64::min);
    gap < COALESCENCE_TOL * scale
}

/// Unlabeled eigen-decomposition from a matrix and its characteristic cubic.
pub fn decompose(a: &ComplexMat3, k: &crate::symbol::CubicCoeffs) -> EigenBranches {
    let lambda = cubic::solve(k);
    let cols = [null_vector(a, lambda[0], 0), null_vector(a, lambda[1], 1), null_vector(a, lambda[2], 2)];
    EigenBranches { lambda, vectors: ComplexMat3::from_columns(cols), defect: is_defective(&lambda) }
}

/// Unlabeled decomposition of the system symbol at `r`.
pub fn raw_eigen(p: &SystemParams, r: f64) -> Result<EigenBranches> {
    Ok(decompose(&assemble(p, r)?, &char_poly(p, r)?))
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Permutation of `values` minimizing the total distance to `targets`, along
/// with a flag raised when a different assignment comes within `1e-10`.
pub fn best_assignment(values: &[C64; 3], targets: &[C64; 3]) -> ([usize; 3], bool) {
    let cost = |p: &[usize; 3]| (0..3).map(|j| (values[p[j]] - targets[j]).norm()).sum::<f64>();
    let tie_key = |p: &[usize; 3]| (0..3).map(|j| j as f64 * values[p[j]].im).sum::<f64>();
    let scale = targets.iter().chain(values.iter()).map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    let tie_tol = 1e-12 * scale;
    let mut order: Vec<_> = PERMS.iter().map(|p| (cost(p), *p)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best_cost = order[0].0;
    let tied: Vec<_> = order.iter().filter(|(cs, _)| cs - best_cost <= tie_tol).collect();
    let chosen = tied.iter().min_by(|a, b| tie_key(&a.1).total_cmp(&tie_key(&b.1))).map(|x| x.1).unwrap();
    // Genuine ambiguity: a distinct eigenvalue assignment with nearly equal cost.
    let ambiguous = order.iter().any(|(cs, p)| {
        *p != chosen && cs - best_cost < 1e-10 && (0..3).any(|j| (values[p[j]] - values[chosen[j]]).norm() > tie_tol)
    });
    (chosen, ambiguous)
}

/// Closed-form roots at `alpha = 1/2`.
pub fn exact_half_eigen(p: &SystemParams, r: f64) -> Result<[C64; 3]> {
    if !p.is_half() {
        return Err(Error::Regime(format!("closed-form roots need alpha = 1/2, got {}", p.alpha)));
    }
    if r < 0.0 {
        return Err(Error::NegativeFrequency(r));
    }
    let scale = r.powf(p.sigma);
    let y = if p.damped { half_constants_damped().map(|y| -y) } else { half_constants_undamped() };
    Ok(y.map(|v| v * scale))
}

/// `(y1, y2, y3)` for the undamped system.
pub fn half_constants_undamped() -> [C64; 3] {
    let s69 = 69f64.sqrt();
    let a = ((3.0 * s69 + 11.0) / 2.0).cbrt();
    let b = ((3.0 * s69 - 11.0) / 2.0).cbrt();
    let (z1, z2) = (a - b, a + b);
    let y1 = c(-(1.0 + z1) / 3.0, 0.0);
    let y2 = -c(1.0 - z1 / 2.0, SQRT3 / 2.0 * z2) / 3.0;
    let y3 = -c(1.0 - z1 / 2.0, -SQRT3 / 2.0 * z2) / 3.0;
    [y1, y2, y3]
}

/// `(y4, y5, y6)` for the damped system; the eigenvalues are `-r^sigma y`.
pub fn half_constants_damped() -> [C64; 3] {
    let z3 = c((-5.5 + 1.5 * 69f64.sqrt()).cbrt() / 3.0, 0.0);
    let z4 = c(-0.5, SQRT3 / 2.0) * z3;
    let z5 = c(-0.5, -SQRT3 / 2.0) * z3;
    [z3, z4, z5].map(|z| z - (z * 9.0).inv() * 5.0 + 2.0 / 3.0)
}

/// Which diagonalization cascade produced an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpansionFamily {
    /// Undamped, `N1` cascade: small `r` with `alpha < 1/2`, large `r` with `alpha > 1/2`.
    UndampedN1,
    /// Undamped, `N4` cascade: large `r` with `alpha < 1/2`, small `r` with `alpha > 1/2`.
    UndampedN4,
    /// Damped, `M1` cascade.
    DampedM1,
    /// Damped, `M4` cascade.
    DampedM4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionOrder {
    pub terms: u32,
    pub remainder_exponent: f64,
}

impl ExpansionFamily {
    pub fn select(p: &SystemParams, zone: Zone) -> Result<Self> {
        if p.is_half() {
            return Err(Error::Regime("no expansion at alpha = 1/2".into()));
        }
        let first = match zone {
            Zone::Small => p.below_half(),
            Zone::Large => p.above_half(),
            Zone::Mid => return Err(Error::Regime("no expansion in the middle zone".into())),
        };
        Ok(match (p.damped, first) {
            (false, true) => Self::UndampedN1,
            (false, false) => Self::UndampedN4,
            (true, true) => Self::DampedM1,
            (true, false) => Self::DampedM4,
        })
    }

    pub fn order(&self, p: &SystemParams) -> ExpansionOrder {
        let (s, a) = (p.sigma, p.alpha);
        match self {
            Self::UndampedN1 => ExpansionOrder { terms: 2, remainder_exponent: 3.0 * s - 4.0 * s * a },
            Self::UndampedN4 => ExpansionOrder { terms: 3, remainder_exponent: 8.0 * s * a - 3.0 * s },
            Self::DampedM1 => ExpansionOrder { terms: 3, remainder_exponent: 3.0 * s - 4.0 * s * a },
            Self::DampedM4 => ExpansionOrder { terms: 1, remainder_exponent: 4.0 * s * a - s },
        }
    }

    pub fn eval(&self, p: &SystemParams, r: f64) -> [C64; 3] {
        let (s, a) = (p.sigma, p.alpha);
        let pw = |e: f64| r.powf(e);
        match self {
            Self::UndampedN1 => {
                let (lead, next) = (pw(2.0 * s * a), pw(2.0 * s - 2.0 * s * a));
                [
                    c(-next, 0.0),
                    -c(0.5, SQRT3 / 2.0) * lead + c(0.5, -SQRT3 / 6.0) * next,
                    -c(0.5, -SQRT3 / 2.0) * lead + c(0.5, SQRT3 / 6.0) * next,
                ]
            }
            Self::UndampedN4 => {
                let (w, sh, d) = (pw(s), pw(4.0 * s * a - s), pw(6.0 * s * a - 2.0 * s));
                [c(-0.5 * d, w + 0.5 * sh), c(-0.5 * d, -w - 0.5 * sh), c(-pw(2.0 * s * a) + d, 0.0)]
            }
            Self::DampedM1 => {
                let (lead, mid, next) = (pw(2.0 * s * a), pw(s), pw(2.0 * s - 2.0 * s * a));
                [
                    c(-next, 0.0),
                    -c(0.5, SQRT3 / 2.0) * lead - c(0.5, SQRT3 / 6.0) * mid + c(0.5, -SQRT3 / 18.0) * next,
                    -c(0.5, -SQRT3 / 2.0) * lead - c(0.5, -SQRT3 / 6.0) * mid + c(0.5, SQRT3 / 18.0) * next,
                ]
            }
            Self::DampedM4 => {
                let w = pw(s);
                [c(-pw(2.0 * s * a), 0.0), -c(0.5, SQRT3 / 2.0) * w, -c(0.5, -SQRT3 / 2.0) * w]
            }
        }
    }
}

/// Truncated expansion of the three branches in `zone`.
pub fn expansion_eigen(p: &SystemParams, r: f64, zone: Zone) -> Result<[C64; 3]> {
    if r < 0.0 {
        return Err(Error::NegativeFrequency(r));
    }
    Ok(ExpansionFamily::select(p, zone)?.eval(p, r))
}

/// Largest distance from an expansion branch to the nearest exact eigenvalue.
pub fn expansion_error(p: &SystemParams, r: f64, zone: Zone) -> Result<f64> {
    let approx = expansion_eigen(p, r, zone)?;
    let exact = raw_eigen(p, r)?.lambda;
    Ok(approx.iter().map(|a| exact.iter().map(|e| (a - e).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max))
}

/// Label anchor at `r`: the closed form at `alpha = 1/2`, otherwise the zone expansion.
fn anchor(p: &SystemParams, r: f64, zone: Zone) -> Result<[C64; 3]> {
    if p.is_half() {
        exact_half_eigen(p, r)
    } else {
        expansion_eigen(p, r, zone)
    }
}

fn label_by(raw: &EigenBranches, targets: &[C64; 3]) -> (EigenBranches, bool) {
    let (perm, amb) = best_assignment(&raw.lambda, targets);
    (raw.permuted(perm), amb)
}

/// Labeled eigen-decomposition with the default zone partition.
pub fn exact_eigen(p: &SystemParams, r: f64) -> Result<EigenBranches> {
    exact_eigen_in(p, r, &ZonePartition::default())
}

/// Labeled eigen-decomposition. Outside the middle zone labels follow the zone
/// expansion; inside, they are continued from the small-zone boundary.
pub fn exact_eigen_in(p: &SystemParams, r: f64, zones: &ZonePartition) -> Result<EigenBranches> {
    let raw = raw_eigen(p, r)?;
    match zones.zone_of(r) {
        Zone::Mid if !p.is_half() => {
            let steps = ((r / zones.eps).ln() / 1.05f64.ln()).ceil().max(1.0) as usize;
            let grid: Vec<f64> = (0..=steps).map(|k| zones.eps * (r / zones.eps).powf(k as f64 / steps as f64)).collect();
            let sweep = sweep_from(p, &grid, zones)?;
            let last = sweep.branches.last().copied().unwrap();
            Ok(label_by(&raw, &last.lambda).0)
        }
        z => {
            let zone = if z == Zone::Mid { Zone::Small } else { z };
            Ok(label_by(&raw, &anchor(p, r, zone)?).0)
        }
    }
}

/// Branches along an ascending grid.
#[derive(Clone, Debug)]
pub struct BranchSweep {
    pub grid: Vec<f64>,
    pub branches: Vec<EigenBranches>,
    /// Set when some step had two nearly equal assignments.
    pub ambiguous: bool,
    /// Whether the labels at the last point agree with that point's zone anchor.
    pub end_consistent: bool,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidParams("sweep needs at least two points".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) || w[0] < 0.0 {
            return Err(Error::InvalidParams("sweep grid must be strictly ascending and nonnegative".into()));
        }
        if w[0] > 0.0 && w[1] / w[0] > 1.1 + 1e-12 {
            return Err(Error::InvalidParams("consecutive grid ratio exceeds 1.1".into()));
        }
    }
    Ok(())
}

fn sweep_from(p: &SystemParams, grid: &[f64], zones: &ZonePartition) -> Result<BranchSweep> {
    let raws: Vec<EigenBranches> = grid.iter().map(|&r| raw_eigen(p, r)).collect::<Result<_>>()?;
    let start_zone = match zones.zone_of(grid[0]) {
        Zone::Large => Zone::Large,
        _ => Zone::Small,
    };
    let (first, mut ambiguous) = label_by(&raws[0], &anchor(p, grid[0], start_zone)?);
    let mut branches = vec![first];
    for raw in &raws[1..] {
        let prev = branches.last().unwrap().lambda;
        let (next, amb) = label_by(raw, &prev);
        ambiguous |= amb;
        branches.push(next);
    }
    let r_end = *grid.last().unwrap();
    let end_zone = match zones.zone_of(r_end) {
        Zone::Small => Some(Zone::Small),
        Zone::Large => Some(Zone::Large),
        Zone::Mid => None,
    };
    let end_consistent = match end_zone {
        Some(z) => {
            let last = branches.last().unwrap();
            let (perm, _) = best_assignment(&last.lambda, &anchor(p, r_end, z)?);
            perm == [0, 1, 2]
        }
        None => true,
    };
    Ok(BranchSweep { grid: grid.to_vec(), branches, ambiguous, end_consistent })
}

/// Continue the branches along `grid`, anchoring labels at the first point.
pub fn branch_sweep(p: &SystemParams, grid: &[f64]) -> Result<BranchSweep> {
    branch_sweep_in(p, grid, &ZonePartition::default())
}

pub fn branch_sweep_in(p: &SystemParams, grid: &[f64], zones: &ZonePartition) -> Result<BranchSweep> {
    check_grid(grid)?;
    sweep_from(p, grid, zones)
}

/// Log-spaced grid from `a` to `b` with `n` points.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_undamped_real_root() {
        let p = SystemParams::undamped(1.0, 0.5);
        let e = exact_eigen(&p, 1.0).unwrap();
        // Oracle: real root of l^3 + l^2 + 2 l + 1 by bisection.
        let (mut lo, mut hi) = (-1.0f64, 0.0f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if ((m + 1.0) * m + 2.0) * m + 1.0 > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        assert!((e.lambda[0].re - lo).abs() < 1e-14);
        assert!((half_constants_undamped()[0].re - lo).abs() < 1e-14);
    }

    #[test]
    fn alpha_zero_origin_spectrum() {
        let p = SystemParams::undamped(1.7, 0.0);
        let e = exact_eigen(&p, 0.0).unwrap();
        let expect = [c(0.0, 0.0), c(-0.5, -SQRT3 / 2.0), c(-0.5, SQRT3 / 2.0)];
        for j in 0..3 {
            assert!((e.lambda[j] - expect[j]).norm() < 1e-14, "{j}: {:?}", e.lambda);
        }
    }

    #[test]
    fn half_damped_values() {
        let y = half_constants_damped();
        assert!((y[0].re - 0.430_159_709_001_946_7).abs() < 1e-12);
        let sum = y[0] + y[1] + y[2];
        assert!((sum - c(2.0, 0.0)).norm() < 1e-12);
        let e = exact_eigen(&SystemParams::damped(1.0, 0.5), 1.0).unwrap();
        assert!((e.lambda[0] + y[0]).norm() < 1e-12);
    }

    #[test]
    fn half_rejects_other_alpha() {
        assert!(exact_half_eigen(&SystemParams::undamped(1.0, 0.4), 1.0).is_err());
        assert_eq!(exact_half_eigen(&SystemParams::undamped(1.0, 0.5), 0.0).unwrap(), [ZERO; 3]);
    }

    #[test]
    fn expansion_examples() {
        let p = SystemParams::undamped(1.0, 0.0);
        let e = expansion_eigen(&p, 0.01, Zone::Small).unwrap();
        assert!((e[0].re + 1e-4).abs() < 1e-18);
        let e = expansion_eigen(&p, 100.0, Zone::Large).unwrap();
        assert!((e[2].re - (-1.0 + 1e-4)).abs() < 1e-15);
        let d = SystemParams::damped(1.0, 0.0);
        let e = expansion_eigen(&d, 100.0, Zone::Large).unwrap();
        assert!((e[1] - c(-50.0, -50.0 * SQRT3)).norm() < 1e-12);
        assert!(expansion_eigen(&SystemParams::undamped(1.0, 0.5), 0.1, Zone::Small).is_err());
        assert!(expansion_eigen(&p, 1.0, Zone::Mid).is_err());
    }

    #[test]
    fn labels_follow_expansions() {
        let p = SystemParams::undamped(1.0, 0.0);
        let e = exact_eigen(&p, 1e-3).unwrap();
        let x = expansion_eigen(&p, 1e-3, Zone::Small).unwrap();
        for j in 0..3 {
            assert!((e.lambda[j] - x[j]).norm() < 1e-6);
        }
    }

    #[test]
    fn sweep_rejects_coarse_grid() {
        let p = SystemParams::undamped(1.0, 0.0);
        assert!(branch_sweep(&p, &[1.0, 2.0]).is_err());
        assert!(branch_sweep(&p, &[1.0]).is_err());
    }

    #[test]
    fn constant_sweep_keeps_labels() {
        // alpha = 0 damped symbol minus its r-dependent part is the constant B1.
        let raw = decompose(&crate::symbol::b1(), &crate::symbol::CubicCoeffs::of_matrix(&crate::symbol::b1()));
        let (perm, _) = best_assignment(&raw.lambda, &raw.lambda);
        assert_eq!(perm, [0, 1, 2]);
    }
}
