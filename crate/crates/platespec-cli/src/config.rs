//! Flat `key = value` run configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use platespec::apps::preset;
use platespec::evolve::{default_weights, slow_mode_weights};
use platespec::quadrature::{DEFAULT_PANELS, DEFAULT_PER_PANEL, DEFAULT_R_MAX, DEFAULT_R_MIN};
use platespec::{DataFamily, InitialData, RadialQuadrature, SystemParams, ZonePartition};

use crate::error::{CliError, CliResult};
use crate::sweep::Sweep;

/// Every key accepted in a config file or as an override.
pub const KEYS: [&str; 26] = [
    "preset",
    "sigma",
    "alpha",
    "damped",
    "dim",
    "family",
    "scale",
    "weights",
    "r_min",
    "r_max",
    "panels",
    "nodes",
    "eps",
    "big_n",
    "t_min",
    "t_max",
    "per_decade",
    "window",
    "s0",
    "kappa",
    "ell",
    "out",
    "threads",
    "seed",
    "samples",
    "sweep",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightChoice {
    /// `(1 + i, 1 - i, 1)`
    Default,
    /// Along the slowest small-frequency branch.
    Slow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub panels: usize,
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { r_min: DEFAULT_R_MIN, r_max: DEFAULT_R_MAX, panels: DEFAULT_PANELS, nodes: DEFAULT_PER_PANEL }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub params: SystemParams,
    pub family: DataFamily,
    pub scale: f64,
    pub weights: WeightChoice,
    pub grid: GridSpec,
    pub zones: ZonePartition,
    /// Explicit time range; otherwise derived from the fit window.
    pub times: Option<(f64, f64)>,
    pub per_decade: usize,
    /// Fit window; each subcommand has its own default.
    pub window: Option<(f64, f64)>,
    pub s0: f64,
    /// Defaults to 1 for moment-free data and 0 otherwise.
    pub kappa: Option<f64>,
    pub ell: f64,
    pub out: PathBuf,
    /// Worker threads; 0 uses the machine default. Never changes the output.
    pub threads: usize,
    pub seed: u64,
    pub samples: usize,
    pub sweep: Option<Sweep>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            params: SystemParams::undamped(1.0, 0.0),
            family: DataFamily::Gaussian,
            scale: 1.0,
            weights: WeightChoice::Default,
            grid: GridSpec::default(),
            zones: ZonePartition::default(),
            times: None,
            per_decade: 8,
            window: None,
            s0: 0.0,
            kappa: None,
            ell: 0.0,
            out: PathBuf::from("out"),
            threads: 0,
            seed: 20_240_917,
            samples: 50,
            sweep: None,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got `{line}`", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse `{v}`")))
}

fn boolean(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got `{v}`"))),
    }
}

/// `T0:T1` with `0 < T0 < T1`.
pub fn parse_range(key: &str, v: &str) -> CliResult<(f64, f64)> {
    let (a, b) = v.split_once(':').ok_or_else(|| CliError::Config(format!("{key}: expected T0:T1, got `{v}`")))?;
    let (a, b): (f64, f64) = (num(key, a.trim())?, num(key, b.trim())?);
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(CliError::Config(format!("{key}: need 0 < T0 < T1, got {a}:{b}")));
    }
    Ok((a, b))
}

impl RunConfig {
    /// Defaults, then the preset, then file pairs, then overrides.
    pub fn build(file: &[(String, String)], overrides: &[(String, String)]) -> CliResult<Self> {
        let mut merged: BTreeMap<&str, &str> = BTreeMap::new();
        let mut order: Vec<(&str, &str)> = Vec::new();
        for (k, v) in file.iter().chain(overrides) {
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Config(format!("unknown key `{k}`")));
            }
            merged.insert(k, v);
            order.push((k, v));
        }
        let mut cfg = Self::default();
        if let Some(name) = merged.get("preset") {
            let pr = preset(name).map_err(|e| CliError::Config(e.to_string()))?;
            cfg.preset = Some(pr.name.to_string());
            cfg.params = pr.params;
            cfg.family = pr.data.family();
            cfg.scale = pr.data.scale();
        }
        for (k, v) in order {
            if k != "preset" {
                cfg.set(k, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, k: &str, v: &str) -> CliResult<()> {
        match k {
            "sigma" => self.params.sigma = num(k, v)?,
            "alpha" => self.params.alpha = num(k, v)?,
            "damped" => self.params.damped = boolean(k, v)?,
            "dim" => self.params.dim_n = num(k, v)?,
            "family" => {
                self.family = match v {
                    "gaussian" => DataFamily::Gaussian,
                    "moment_free" => DataFamily::MomentFree,
                    _ => return Err(CliError::Config(format!("family: expected gaussian or moment_free, got `{v}`"))),
                }
            }
            "scale" => self.scale = num(k, v)?,
            "weights" => {
                self.weights = match v {
                    "default" => WeightChoice::Default,
                    "slow" => WeightChoice::Slow,
                    _ => return Err(CliError::Config(format!("weights: expected default or slow, got `{v}`"))),
                }
            }
            "r_min" => self.grid.r_min = num(k, v)?,
            "r_max" => self.grid.r_max = num(k, v)?,
            "panels" => self.grid.panels = num(k, v)?,
            "nodes" => self.grid.nodes = num(k, v)?,
            "eps" => self.zones.eps = num(k, v)?,
            "big_n" => self.zones.big_n = num(k, v)?,
            "t_min" => self.times = Some((num(k, v)?, self.times.map_or(f64::NAN, |t| t.1))),
            "t_max" => self.times = Some((self.times.map_or(f64::NAN, |t| t.0), num(k, v)?)),
            "per_decade" => self.per_decade = num(k, v)?,
            "window" => self.window = Some(parse_range(k, v)?),
            "s0" => self.s0 = num(k, v)?,
            "kappa" => self.kappa = Some(num(k, v)?),
            "ell" => self.ell = num(k, v)?,
            "out" => self.out = PathBuf::from(v),
            "threads" => self.threads = num(k, v)?,
            "seed" => self.seed = num(k, v)?,
            "samples" => self.samples = num(k, v)?,
            "sweep" => self.sweep = Some(v.parse()?),
            _ => unreachable!("key list checked in build"),
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        let cfg = |e: platespec::Error| CliError::Config(e.to_string());
        self.params.validate().map_err(cfg)?;
        ZonePartition::new(self.zones.eps, self.zones.big_n).map_err(cfg)?;
        self.quadrature()?;
        if let Some((a, b)) = self.times {
            if !(a >= 0.0 && b > a && b.is_finite()) {
                return Err(CliError::Config("t_min and t_max must both be set with 0 <= t_min < t_max".into()));
            }
        }
        if self.per_decade == 0 || self.samples == 0 {
            return Err(CliError::Config("per_decade and samples must be positive".into()));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(CliError::Config("scale must be positive".into()));
        }
        if self.s0 < 0.0 || self.ell < 0.0 || self.kappa.is_some_and(|k| !(0.0..=1.0).contains(&k)) {
            return Err(CliError::Config("need s0 >= 0, ell >= 0 and kappa in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> CliResult<RadialQuadrature> {
        let g = self.grid;
        if g.r_max <= self.zones.big_n || g.r_min >= self.zones.eps {
            return Err(CliError::Config("grid must extend past both zone cutoffs".into()));
        }
        RadialQuadrature::new(g.r_min, g.r_max, g.panels, g.nodes, self.params.dim_n)
            .map(|q| q.with_breakpoints(&[self.zones.eps, self.zones.big_n]))
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn kappa_value(&self) -> f64 {
        self.kappa.unwrap_or(if self.family == DataFamily::MomentFree { 1.0 } else { 0.0 })
    }

    /// Initial data of the configured family for `p`.
    pub fn data_for(&self, p: &SystemParams) -> CliResult<InitialData> {
        let w = match self.weights {
            WeightChoice::Default => default_weights(),
            WeightChoice::Slow => slow_mode_weights(p)?,
        };
        Ok(match self.family {
            DataFamily::MomentFree => InitialData::moment_free(self.scale, w, p.dim_n)?,
            _ => InitialData::gaussian(self.scale, w, p.dim_n)?,
        })
    }

    pub fn window_or(&self, default: (f64, f64)) -> (f64, f64) {
        self.window.unwrap_or(default)
    }

    /// Sample times: explicit range, or the window extended by half a decade.
    pub fn times_or(&self, window: (f64, f64)) -> Vec<f64> {
        let (a, b) = self.times.unwrap_or((window.0, window.1 * 10f64.sqrt()));
        platespec::rates::geometric_times(a.max(f64::MIN_POSITIVE), b, self.per_decade)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(s: &str) -> Vec<(String, String)> {
        parse_pairs(s).unwrap()
    }

    #[test]
    fn file_then_overrides() {
        let file = pairs("sigma = 2\n# comment\nalpha=0.25  # trailing\ndamped = true\n");
        let over = pairs("alpha = 0.75");
        let c = RunConfig::build(&file, &over).unwrap();
        assert_eq!((c.params.sigma, c.params.alpha, c.params.damped), (2.0, 0.75, true));
    }

    #[test]
    fn preset_then_keys() {
        let c = RunConfig::build(&pairs("alpha = 0.1\npreset = plate"), &[]).unwrap();
        assert_eq!((c.params.sigma, c.params.alpha), (2.0, 0.1));
        assert_eq!(c.preset.as_deref(), Some("plate"));
    }

    #[test]
    fn errors() {
        assert!(parse_pairs("sigma 2").is_err());
        assert!(RunConfig::build(&pairs("colour = red"), &[]).is_err());
        assert!(RunConfig::build(&pairs("sigma = 0.5"), &[]).is_err());
        assert!(RunConfig::build(&pairs("window = 5:1"), &[]).is_err());
        assert!(RunConfig::build(&pairs("preset = nope"), &[]).is_err());
        assert!(RunConfig::build(&pairs("damped = maybe"), &[]).is_err());
        assert!(RunConfig::build(&pairs("t_min = 1"), &[]).is_err());
        assert!(RunConfig::build(&pairs("r_max = 5"), &[]).is_err());
    }

    #[test]
    fn derived_values() {
        let c = RunConfig::build(&pairs("family = moment_free\nwindow = 10:1000"), &[]).unwrap();
        assert_eq!(c.kappa_value(), 1.0);
        let t = c.times_or(c.window_or((1.0, 2.0)));
        assert_eq!(t[0], 10.0);
        assert!((t.last().unwrap() / 1000.0 / 10f64.sqrt() - 1.0).abs() < 1e-12);
    }
}
