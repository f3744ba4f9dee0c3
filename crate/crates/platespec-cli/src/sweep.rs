//! Named acceptance sweeps and their tolerances.

use std::str::FromStr;

use crate::error::CliError;

/// A fixed parameter matrix run by one subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sweep {
    Roots,
    Expansions,
    Gap,
    Key,
    Decay,
    Envelope,
    Improvement,
    Hygiene,
}

pub const SWEEPS: [Sweep; 8] =
    [Sweep::Roots, Sweep::Expansions, Sweep::Gap, Sweep::Key, Sweep::Decay, Sweep::Envelope, Sweep::Improvement, Sweep::Hygiene];

impl Sweep {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Roots => "roots",
            Self::Expansions => "expansions",
            Self::Gap => "gap",
            Self::Key => "key",
            Self::Decay => "decay",
            Self::Envelope => "envelope",
            Self::Improvement => "improvement",
            Self::Hygiene => "hygiene",
        }
    }

    /// The subcommand that runs this sweep.
    pub fn subcommand(&self) -> &'static str {
        match self {
            Self::Roots | Self::Expansions | Self::Gap | Self::Key => "eigen",
            Self::Decay => "decay",
            Self::Envelope => "pointwise",
            Self::Improvement => "profile",
            Self::Hygiene => "report",
        }
    }
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        SWEEPS.into_iter().find(|w| w.name() == s).ok_or_else(|| CliError::Config(format!("unknown sweep `{s}`")))
    }
}

/// Pass/fail thresholds of every check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub identity_residual: f64,
    pub half_root: f64,
    pub half_sum: f64,
    pub expansion_slope: f64,
    pub key_ratio: (f64, f64),
    pub decay_slope: f64,
    pub fit_shift: f64,
    pub envelope_slope: f64,
    pub improvement_slack: f64,
    pub mgt_drift: f64,
    pub semigroup: f64,
    pub refinement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_residual: 1e-12,
            half_root: 1e-10,
            half_sum: 1e-12,
            expansion_slope: 0.15,
            key_ratio: (0.05, 20.0),
            decay_slope: 0.03,
            fit_shift: 0.02,
            envelope_slope: 0.1,
            improvement_slack: 0.1,
            mgt_drift: 1e-9,
            semigroup: 1e-9,
            refinement: 1e-8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for w in SWEEPS {
            assert_eq!(w.name().parse::<Sweep>().unwrap(), w);
        }
        assert!("nope".parse::<Sweep>().is_err());
    }
}
