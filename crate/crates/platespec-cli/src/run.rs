//! Dispatch from subcommands to experiments, and file output.

use std::fs;
use std::str::FromStr;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::{self as ex, Output};
use crate::sweep::{Sweep, Tolerances};
use crate::table::{check_table, plot_script, Axes};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Eigen,
    Identities,
    Pointwise,
    Decay,
    Profile,
    Mgt,
    Report,
}

pub const SUBCOMMANDS: [Subcommand; 7] = [
    Subcommand::Eigen,
    Subcommand::Identities,
    Subcommand::Pointwise,
    Subcommand::Decay,
    Subcommand::Profile,
    Subcommand::Mgt,
    Subcommand::Report,
];

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Eigen => "eigen",
            Self::Identities => "identities",
            Self::Pointwise => "pointwise",
            Self::Decay => "decay",
            Self::Profile => "profile",
            Self::Mgt => "mgt",
            Self::Report => "report",
        }
    }
}

impl FromStr for Subcommand {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        SUBCOMMANDS.into_iter().find(|c| c.name() == s).ok_or_else(|| CliError::Config(format!("unknown subcommand `{s}`")))
    }
}

/// The one invocation that checks acceptance criterion `k` (1 to 10).
pub fn criterion_invocation(k: u8) -> Option<(Subcommand, Option<Sweep>)> {
    Some(match k {
        1 => (Subcommand::Identities, None),
        2 => (Subcommand::Eigen, Some(Sweep::Roots)),
        3 => (Subcommand::Eigen, Some(Sweep::Expansions)),
        4 => (Subcommand::Eigen, Some(Sweep::Gap)),
        5 => (Subcommand::Eigen, Some(Sweep::Key)),
        6 => (Subcommand::Decay, Some(Sweep::Decay)),
        7 => (Subcommand::Pointwise, Some(Sweep::Envelope)),
        8 => (Subcommand::Profile, Some(Sweep::Improvement)),
        9 => (Subcommand::Mgt, None),
        10 => (Subcommand::Report, Some(Sweep::Hygiene)),
        _ => return None,
    })
}

/// Command line for criterion `k`, as documented.
pub fn criterion_command(k: u8) -> Option<String> {
    let (sub, sweep) = criterion_invocation(k)?;
    Some(match sweep {
        Some(w) => format!("platespec {} --sweep {}", sub.name(), w.name()),
        None => format!("platespec {}", sub.name()),
    })
}

pub fn run_criterion(k: u8, cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let (sub, sweep) = criterion_invocation(k).ok_or_else(|| CliError::Config(format!("no criterion {k}")))?;
    let cfg = RunConfig { sweep, ..cfg.clone() };
    execute(sub, &cfg, tol)
}

fn wrong_sweep(sub: Subcommand, w: Sweep) -> CliError {
    CliError::Config(format!("sweep `{}` belongs to `{}`, not `{}`", w.name(), w.subcommand(), sub.name()))
}

/// Runs one subcommand without touching the file system.
pub fn execute(sub: Subcommand, cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    use Subcommand as S;
    match (sub, cfg.sweep) {
        (_, Some(w)) if w.subcommand() != sub.name() => Err(wrong_sweep(sub, w)),
        (S::Identities, None) => ex::identities(cfg, tol),
        (S::Eigen, None) => ex::eigen_single(cfg, tol),
        (S::Eigen, Some(Sweep::Roots)) => ex::roots(cfg, tol),
        (S::Eigen, Some(Sweep::Expansions)) => ex::expansions(cfg, tol),
        (S::Eigen, Some(Sweep::Gap)) => ex::gap(cfg, tol),
        (S::Eigen, Some(Sweep::Key)) => ex::key(cfg, tol),
        (S::Pointwise, None) => ex::pointwise_single(cfg, tol),
        (S::Pointwise, Some(Sweep::Envelope)) => ex::envelope_sweep(cfg, tol),
        (S::Decay, None) => ex::decay_single(cfg, tol),
        (S::Decay, Some(Sweep::Decay)) => ex::decay_sweep(cfg, tol),
        (S::Profile, None) => ex::profile_single(cfg, tol),
        (S::Profile, Some(Sweep::Improvement)) => ex::improvement_sweep(cfg, tol),
        (S::Mgt, None) => ex::mgt(cfg, tol),
        (S::Report, Some(Sweep::Hygiene)) => ex::hygiene(cfg, tol),
        (S::Report, None) => full_report(cfg, tol),
        (_, Some(w)) => Err(wrong_sweep(sub, w)),
    }
}

/// Every criterion in turn; the detail table is the check table itself.
fn full_report(cfg: &RunConfig, tol: &Tolerances) -> CliResult<Output> {
    let mut checks = Vec::new();
    for k in 1..=10 {
        checks.extend(run_criterion(k, cfg, tol)?.checks);
    }
    let t = check_table(&checks);
    Ok(Output::new(
        "report",
        t,
        |s, h| plot_script(s, "measured values", Axes::LogY, "criterion", "measured", h, &[(1, 4)]),
        checks,
    ))
}

fn in_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Config(format!("threads: {e}")))?;
    Ok(pool.install(f))
}

/// Runs a subcommand and writes `<stem>.csv`, `<stem>.gp` and `report.csv` under `cfg.out`.
pub fn run(sub: Subcommand, cfg: &RunConfig) -> CliResult<Output> {
    let tol = Tolerances::default();
    let out = in_threads(cfg.threads, || execute(sub, cfg, &tol))??;
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join(format!("{}.csv", out.stem)), out.table.to_csv())?;
    fs::write(cfg.out.join(format!("{}.gp", out.stem)), &out.plot)?;
    if out.stem != "report" {
        fs::write(cfg.out.join("report.csv"), check_table(&out.checks).to_csv())?;
    }
    Ok(out)
}
