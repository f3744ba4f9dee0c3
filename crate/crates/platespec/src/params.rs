//! System parameters, frequency zones and the key decay functions.

use crate::error::{Error, Result};

const HALF_TOL: f64 = 1e-12;

/// `(sigma, alpha, damped, n)` selecting one of the two plate systems.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub sigma: f64,
    pub alpha: f64,
    /// Adds the structural damping term when set.
    pub damped: bool,
    pub dim_n: u32,
}

impl SystemParams {
    pub fn new(sigma: f64, alpha: f64, damped: bool, dim_n: u32) -> Result<Self> {
        let p = Self { sigma, alpha, damped, dim_n };
        p.validate()?;
        Ok(p)
    }

    pub fn undamped(sigma: f64, alpha: f64) -> Self {
        Self::new(sigma, alpha, false, 1).expect("valid parameters")
    }

    pub fn damped(sigma: f64, alpha: f64) -> Self {
        Self::new(sigma, alpha, true, 1).expect("valid parameters")
    }

    pub fn with_dim(mut self, n: u32) -> Self {
        self.dim_n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 1.0) {
            return Err(Error::InvalidParams(format!("sigma = {} must be >= 1", self.sigma)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParams(format!("alpha = {} must lie in [0, 1]", self.alpha)));
        }
        if self.dim_n == 0 {
            return Err(Error::InvalidParams("dimension must be >= 1".into()));
        }
        Ok(())
    }

    pub fn is_half(&self) -> bool {
        (self.alpha - 0.5).abs() < HALF_TOL
    }

    pub fn below_half(&self) -> bool {
        self.alpha < 0.5 - HALF_TOL
    }

    pub fn above_half(&self) -> bool {
        self.alpha > 0.5 + HALF_TOL
    }
}

/// Frequency zone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Zone {
    Small,
    Mid,
    Large,
}

/// Sharp cutoffs splitting `(0, inf)` into `r <= eps`, `eps < r < big_n` and `r >= big_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZonePartition {
    pub eps: f64,
    pub big_n: f64,
}

impl Default for ZonePartition {
    fn default() -> Self {
        Self { eps: 0.3, big_n: 10.0 }
    }
}

impl ZonePartition {
    pub fn new(eps: f64, big_n: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < big_n && big_n.is_finite()) {
            return Err(Error::InvalidParams(format!("zone cutoffs need 0 < eps < N, got {eps}, {big_n}")));
        }
        Ok(Self { eps, big_n })
    }

    pub fn zone_of(&self, r: f64) -> Zone {
        if r <= self.eps {
            Zone::Small
        } else if r < self.big_n {
            Zone::Mid
        } else {
            Zone::Large
        }
    }

    pub fn contains(&self, zone: Zone, r: f64) -> bool {
        self.zone_of(r) == zone
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfSide {
    BelowHalf,
    AtHalf,
    AboveHalf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LossClass {
    RegularityLoss,
    NoLoss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaRegime {
    pub side: HalfSide,
    pub loss: LossClass,
}

pub fn classify(p: &SystemParams) -> AlphaRegime {
    let side = if p.is_half() {
        HalfSide::AtHalf
    } else if p.alpha < 0.5 {
        HalfSide::BelowHalf
    } else {
        HalfSide::AboveHalf
    };
    let loss = if !p.damped && p.alpha < 1.0 / 3.0 { LossClass::RegularityLoss } else { LossClass::NoLoss };
    AlphaRegime { side, loss }
}

/// `rho(r)` for the undamped system, `eta(r)` for the damped one.
pub fn key_function(p: &SystemParams, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let (s, a) = (p.sigma, p.alpha);
    let q = 1.0 + r * r;
    let (num, den) = match (p.damped, a <= 0.5) {
        (false, true) => (2.0 * s - 2.0 * s * a, 2.0 * s - 4.0 * s * a),
        (false, false) => (6.0 * s * a - 2.0 * s, 4.0 * s * a - 2.0 * s),
        (true, true) => (2.0 * s - 2.0 * s * a, s - 2.0 * s * a),
        (true, false) => (2.0 * s * a, 2.0 * s * a - s),
    };
    // Split the power of (1 + r^2) to keep huge r finite.
    (num * r.ln() - den * q.ln()).exp()
}
