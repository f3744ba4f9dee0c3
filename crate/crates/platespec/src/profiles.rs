//! Reference systems, their profile functions and zone-localized difference norms.

use std::collections::BTreeMap;

use crate::diag::{step_matrix, StepMatrix};
use crate::error::{Error, Result};
use crate::evolve::{sobolev_norm, Evolution, InitialData, SpectralState};
use crate::mat3::{c, ComplexMat3, Vec3, C64, ZERO};
use crate::par;
use crate::params::{SystemParams, Zone, ZonePartition};
use crate::quadrature::RadialQuadrature;
use crate::rates::{fit_decay, DecayFit};

const S3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProfileId {
    /// Undamped, `alpha in [0, 1/2)`, small frequencies.
    Rs1,
    /// Undamped, large frequencies for `alpha in [0, 1/3)`, small for `alpha in (1/2, 1]`.
    Rs2,
    /// Damped, `alpha in [0, 1/2)`, small frequencies.
    Rs3,
    /// Damped, `alpha in (1/2, 1]`, small frequencies.
    Rs4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProfileVariant {
    pub id: ProfileId,
    pub zone: Zone,
}

impl ProfileVariant {
    /// The profile approximating the solution in `zone`, if the regime has one.
    pub fn for_zone(p: &SystemParams, zone: Zone) -> Result<Self> {
        let a = p.alpha;
        let id = match (p.damped, zone) {
            _ if p.is_half() => None,
            (false, Zone::Small) if a < 0.5 => Some(ProfileId::Rs1),
            (false, Zone::Small) => Some(ProfileId::Rs2),
            (false, Zone::Large) if a < 1.0 / 3.0 => Some(ProfileId::Rs2),
            (true, Zone::Small) if a < 0.5 => Some(ProfileId::Rs3),
            (true, Zone::Small) => Some(ProfileId::Rs4),
            _ => None,
        };
        id.map(|id| Self { id, zone }).ok_or_else(|| Error::Regime(format!("no profile for {p:?} in the {zone:?} zone")))
    }

    pub fn check(&self, p: &SystemParams) -> Result<()> {
        match Self::for_zone(p, self.zone) {
            Ok(v) if v == *self => Ok(()),
            _ => Err(Error::Regime(format!("{:?} in the {:?} zone is not valid for {p:?}", self.id, self.zone))),
        }
    }
}

fn check_id(id: ProfileId, p: &SystemParams) -> Result<()> {
    let ok = [Zone::Small, Zone::Large].iter().any(|&z| ProfileVariant::for_zone(p, z).is_ok_and(|v| v.id == id));
    if ok {
        Ok(())
    } else {
        Err(Error::Regime(format!("{id:?} is not valid for {p:?}")))
    }
}

/// Diagonal of the reference system at `r`.
pub fn profile_eigenvalue(id: ProfileId, p: &SystemParams, r: f64) -> Result<[C64; 3]> {
    check_id(id, p)?;
    if r < 0.0 {
        return Err(Error::NegativeFrequency(r));
    }
    let (s, a) = (p.sigma, p.alpha);
    let pw = |e: f64| r.powf(e);
    let lead = c(0.5, S3 / 2.0);
    Ok(match id {
        ProfileId::Rs1 => {
            let (l, n) = (pw(2.0 * s * a), pw(2.0 * s - 2.0 * s * a));
            [c(-n, 0.0), -lead * l + c(0.5, -S3 / 6.0) * n, -lead.conj() * l + c(0.5, S3 / 6.0) * n]
        }
        ProfileId::Rs2 => {
            let (w, sh, d) = (pw(s), pw(4.0 * s * a - s), pw(6.0 * s * a - 2.0 * s));
            [c(-0.5 * d, w + 0.5 * sh), c(-0.5 * d, -w - 0.5 * sh), c(-pw(2.0 * s * a) + d, 0.0)]
        }
        ProfileId::Rs3 => {
            let d0 = [ZERO, lead, lead.conj()];
            let d1 = [ZERO, c(0.5, S3 / 6.0), c(0.5, -S3 / 6.0)];
            let d2 = [c(1.0, 0.0), c(-0.5, S3 / 18.0), c(-0.5, -S3 / 18.0)];
            let (e0, e1, e2) = (pw(2.0 * s * a), pw(2.0 * s), pw(2.0 * s - 2.0 * s * a));
            [0, 1, 2].map(|j| -d0[j] * e0 - d1[j] * e1 - d2[j] * e2)
        }
        ProfileId::Rs4 => {
            let w = pw(s);
            [c(-pw(2.0 * s * a), 0.0), -lead * w, -lead.conj() * w]
        }
    })
}

/// Left transformation of the reference system; the right one is its inverse.
pub fn profile_transform(id: ProfileId, p: &SystemParams, r: f64) -> Result<ComplexMat3> {
    check_id(id, p)?;
    let st = |w| ComplexMat3::identity() + step_matrix(w, p, r);
    use StepMatrix::*;
    Ok(match id {
        ProfileId::Rs1 => N1.constant() * st(N2),
        ProfileId::Rs2 => st(N4) * st(N5),
        ProfileId::Rs3 => M1.constant() * st(M2),
        ProfileId::Rs4 => M4.constant(),
    })
}

#[derive(Clone, Copy, Debug)]
struct ProfileNode {
    left: ComplexMat3,
    coeffs: Vec3,
    lambda: [C64; 3],
}

/// Profile evaluator on a grid, reusable across times.
#[derive(Clone, Debug)]
pub struct ProfileEvolution {
    pub variant: ProfileVariant,
    pub grid: Vec<f64>,
    nodes: Vec<Option<ProfileNode>>,
    moments: Vec3,
}

impl ProfileEvolution {
    pub fn new(
        variant: ProfileVariant,
        p: &SystemParams,
        data: &InitialData,
        quad: &RadialQuadrature,
        zones: &ZonePartition,
    ) -> Result<Self> {
        variant.check(p)?;
        let built: Vec<Result<Option<ProfileNode>>> = par::map(quad.len(), |k| {
            let r = quad.nodes[k];
            if !zones.contains(variant.zone, r) {
                return Ok(None);
            }
            let left = profile_transform(variant.id, p, r)?;
            let right = left.inverse().ok_or_else(|| Error::Regime(format!("profile transformation singular at r = {r}")))?;
            let lambda = profile_eigenvalue(variant.id, p, r)?;
            Ok(Some(ProfileNode { left, coeffs: right.mul_vec(&data.eval(r)), lambda }))
        });
        let nodes = built.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { variant, grid: quad.nodes.clone(), nodes, moments: data.moments() })
    }

    pub fn state(&self, t: f64) -> SpectralState {
        let amplitudes = par::map(self.grid.len(), |k| match &self.nodes[k] {
            None => [ZERO; 3],
            Some(n) => {
                let z = [0, 1, 2].map(|j| n.coeffs[j] * (n.lambda[j] * t).exp());
                n.left.mul_vec(&z)
            }
        });
        SpectralState { grid: self.grid.clone(), amplitudes, time: t, moments: self.moments }
    }
}

pub fn profile_state(
    variant: ProfileVariant,
    p: &SystemParams,
    data: &InitialData,
    t: f64,
    quad: &RadialQuadrature,
) -> Result<SpectralState> {
    Ok(ProfileEvolution::new(variant, p, data, quad, &ZonePartition::default())?.state(t))
}

pub const SMALL_SOLUTION: &str = "small_solution";
pub const SMALL_DIFFERENCE: &str = "small_difference";
pub const LARGE_SOLUTION: &str = "large_solution";
pub const LARGE_DIFFERENCE: &str = "large_difference";
pub const COMBINED_DIFFERENCE: &str = "combined_difference";

/// Solution and profiles on a shared grid.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub params: SystemParams,
    pub zones: ZonePartition,
    pub solution: Evolution,
    pub small: ProfileEvolution,
    pub large: Option<ProfileEvolution>,
}

impl Refinement {
    pub fn new(p: &SystemParams, data: &InitialData, quad: &RadialQuadrature, zones: &ZonePartition) -> Result<Self> {
        if p.is_half() {
            return Err(Error::Regime("no profiles at alpha = 1/2".into()));
        }
        let small = ProfileEvolution::new(ProfileVariant::for_zone(p, Zone::Small)?, p, data, quad, zones)?;
        let large = match ProfileVariant::for_zone(p, Zone::Large) {
            Ok(v) => Some(ProfileEvolution::new(v, p, data, quad, zones)?),
            Err(_) => None,
        };
        Ok(Self { params: *p, zones: *zones, solution: Evolution::new(p, data, quad)?, small, large })
    }

    /// Zone-localized solution and difference norms at one time.
    pub fn norms(&self, t: f64, s0: f64, quad: &RadialQuadrature) -> Result<BTreeMap<&'static str, f64>> {
        let w = self.solution.state(t)?;
        let zp = &self.zones;
        let mut out = BTreeMap::new();
        let ds = w.difference(&self.small.state(t))?;
        out.insert(SMALL_SOLUTION, sobolev_norm(&w, s0, Some((Zone::Small, zp)), quad)?);
        out.insert(SMALL_DIFFERENCE, sobolev_norm(&ds, s0, Some((Zone::Small, zp)), quad)?);
        if let Some(large) = &self.large {
            let sl = large.state(t);
            out.insert(LARGE_SOLUTION, sobolev_norm(&w, s0, Some((Zone::Large, zp)), quad)?);
            out.insert(LARGE_DIFFERENCE, sobolev_norm(&w.difference(&sl)?, s0, Some((Zone::Large, zp)), quad)?);
            out.insert(COMBINED_DIFFERENCE, sobolev_norm(&ds.difference(&sl)?, s0, None, quad)?);
        }
        Ok(out)
    }
}

pub fn refinement_norm(
    p: &SystemParams,
    data: &InitialData,
    t: f64,
    s0: f64,
    quad: &RadialQuadrature,
) -> Result<BTreeMap<&'static str, f64>> {
    Refinement::new(p, data, quad, &ZonePartition::default())?.norms(t, s0, quad)
}

/// Fitted slopes of the solution and difference norms in one zone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImprovementFit {
    pub solution: DecayFit,
    pub difference: DecayFit,
}

impl ImprovementFit {
    /// `slope(difference) - slope(solution)`; negative when the profile improves the rate.
    pub fn gain(&self) -> f64 {
        self.difference.slope - self.solution.slope
    }
}

pub fn fit_improvement(
    refinement: &Refinement,
    zone: Zone,
    s0: f64,
    times: &[f64],
    window: (f64, f64),
    quad: &RadialQuadrature,
) -> Result<ImprovementFit> {
    let (sk, dk) = match zone {
        Zone::Small => (SMALL_SOLUTION, SMALL_DIFFERENCE),
        Zone::Large => (LARGE_SOLUTION, LARGE_DIFFERENCE),
        Zone::Mid => return Err(Error::Regime("no middle-zone profile".into())),
    };
    let mut sol = Vec::with_capacity(times.len());
    let mut dif = Vec::with_capacity(times.len());
    for &t in times {
        let m = refinement.norms(t, s0, quad)?;
        let missing = || Error::Regime(format!("no {zone:?}-zone profile for {:?}", refinement.params));
        sol.push(*m.get(sk).ok_or_else(missing)?);
        dif.push(*m.get(dk).ok_or_else(missing)?);
    }
    Ok(ImprovementFit { solution: fit_decay(times, &sol, window)?, difference: fit_decay(times, &dif, window)? })
}

/// Large-zone slopes for algebraic-tail data: the difference at tail `p_tail`
/// against the solution at tail `p_tail + sigma - 2 sigma alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularityGain {
    pub tail: f64,
    pub shift: f64,
    pub solution_slope: f64,
    pub shifted_solution_slope: f64,
    pub difference_slope: f64,
}

pub fn regularity_gain(
    p: &SystemParams,
    s0: f64,
    tail: f64,
    times: &[f64],
    window: (f64, f64),
    quad: &RadialQuadrature,
    zones: &ZonePartition,
) -> Result<RegularityGain> {
    ProfileVariant::for_zone(p, Zone::Large)?;
    let shift = p.sigma - 2.0 * p.sigma * p.alpha;
    let weights = crate::evolve::default_weights();
    let n = p.dim_n;
    let base = Refinement::new(p, &InitialData::algebraic_tail(tail, weights, n), quad, zones)?;
    let shifted = Refinement::new(p, &InitialData::algebraic_tail(tail + shift, weights, n), quad, zones)?;
    let a = fit_improvement(&base, Zone::Large, s0, times, window, quad)?;
    let b = fit_improvement(&shifted, Zone::Large, s0, times, window, quad)?;
    Ok(RegularityGain {
        tail,
        shift,
        solution_slope: a.solution.slope,
        shifted_solution_slope: b.solution.slope,
        difference_slope: a.difference.slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::ExpansionFamily;
    use crate::evolve::default_weights;
    use crate::mat3::{vec_norm, vec_sub};

    #[test]
    fn printed_values() {
        let l = profile_eigenvalue(ProfileId::Rs1, &SystemParams::undamped(1.0, 0.0), 0.1).unwrap();
        assert!((l[0] - c(-0.01, 0.0)).norm() < 1e-17);
        let l = profile_eigenvalue(ProfileId::Rs2, &SystemParams::undamped(1.0, 0.0), 10.0).unwrap();
        assert!((l[2] - c(-1.0 + 0.01, 0.0)).norm() < 1e-15);
        let l = profile_eigenvalue(ProfileId::Rs4, &SystemParams::damped(1.0, 0.75), 0.1).unwrap();
        assert!((l[0].re + 10f64.powf(-1.5)).abs() < 1e-17);
    }

    #[test]
    fn validity() {
        assert!(profile_eigenvalue(ProfileId::Rs1, &SystemParams::undamped(1.0, 0.6), 0.1).is_err());
        assert!(profile_eigenvalue(ProfileId::Rs2, &SystemParams::undamped(1.0, 0.4), 0.1).is_err());
        assert!(profile_eigenvalue(ProfileId::Rs2, &SystemParams::undamped(1.0, 0.2), 20.0).is_ok());
        assert!(profile_eigenvalue(ProfileId::Rs3, &SystemParams::undamped(1.0, 0.2), 0.1).is_err());
        assert!(profile_eigenvalue(ProfileId::Rs4, &SystemParams::damped(1.0, 0.5), 0.1).is_err());
        assert!(ProfileVariant::for_zone(&SystemParams::undamped(1.0, 0.4), Zone::Large).is_err());
        assert!(ProfileVariant::for_zone(&SystemParams::damped(1.0, 0.2), Zone::Large).is_err());
    }

    #[test]
    fn matches_truncated_expansions() {
        let cases = [
            (ProfileId::Rs1, SystemParams::undamped(1.3, 0.2), ExpansionFamily::UndampedN1, 0.05),
            (ProfileId::Rs2, SystemParams::undamped(1.3, 0.2), ExpansionFamily::UndampedN4, 40.0),
            (ProfileId::Rs2, SystemParams::undamped(1.3, 0.8), ExpansionFamily::UndampedN4, 0.05),
            (ProfileId::Rs4, SystemParams::damped(1.3, 0.8), ExpansionFamily::DampedM4, 0.05),
        ];
        for (id, p, fam, r) in cases {
            assert_eq!(profile_eigenvalue(id, &p, r).unwrap(), fam.eval(&p, r));
        }
    }

    #[test]
    fn zero_time_returns_localized_data() {
        let q = RadialQuadrature::new(1e-3, 1e2, 10, 4, 1).unwrap();
        let zp = ZonePartition::default();
        let p = SystemParams::undamped(1.0, 0.0);
        let d = InitialData::gaussian(1.0, default_weights(), 1).unwrap();
        let v = ProfileVariant::for_zone(&p, Zone::Small).unwrap();
        let s = ProfileEvolution::new(v, &p, &d, &q, &zp).unwrap().state(0.0);
        for (k, r) in q.nodes.iter().enumerate() {
            let want = if *r <= zp.eps { d.eval(*r) } else { [ZERO; 3] };
            assert!(vec_norm(&vec_sub(&s.amplitudes[k], &want)) < 1e-14);
        }
    }

    #[test]
    fn refinement_keys() {
        let q = RadialQuadrature::new(1e-3, 1e2, 10, 4, 1).unwrap();
        let d = InitialData::gaussian(1.0, default_weights(), 1).unwrap();
        let m = refinement_norm(&SystemParams::undamped(1.0, 0.0), &d, 1.0, 0.0, &q).unwrap();
        assert_eq!(m.len(), 5);
        let m = refinement_norm(&SystemParams::damped(1.0, 0.75), &d, 1.0, 0.0, &q).unwrap();
        assert_eq!(m.keys().copied().collect::<Vec<_>>(), vec![SMALL_DIFFERENCE, SMALL_SOLUTION]);
        assert!(refinement_norm(&SystemParams::damped(1.0, 0.5), &d, 1.0, 0.0, &q).is_err());
    }
}
