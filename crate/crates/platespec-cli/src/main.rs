use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSub};

use platespec_cli::config::{parse_pairs, RunConfig};
use platespec_cli::error::{CliError, CliResult};
use platespec_cli::run::{run, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "platespec", version, about = "Spectral experiments for thermoelastic plate systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSub, Debug)]
enum Command {
    /// Eigenvalue branches, closed forms, expansions, gap and key function.
    Eigen(Common),
    /// Step-identity residuals at seeded random parameters.
    Identities(Common),
    /// Pointwise exponential envelope in frequency.
    Pointwise(Common),
    /// Algebraic decay of the small-frequency norm.
    Decay(Common),
    /// Profile refinement and its rate improvement.
    Profile(Common),
    /// Energy conservation of the reduced MGT equation.
    Mgt(Common),
    /// All checks, or the numerical hygiene sweep.
    Report(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Flat key = value file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Structural damping; `--damped` alone means true.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    damped: Option<bool>,
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit window `T0:T1`.
    #[arg(long)]
    window: Option<String>,
    /// Named parameter sweep.
    #[arg(long)]
    sweep: Option<String>,
    /// Worker threads; 0 uses the machine default.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut v = Vec::new();
        let mut put = |k: &str, x: Option<String>| {
            if let Some(x) = x {
                v.push((k.to_string(), x));
            }
        };
        put("preset", self.preset.clone());
        put("sigma", self.sigma.map(|x| x.to_string()));
        put("alpha", self.alpha.map(|x| x.to_string()));
        put("damped", self.damped.map(|x| x.to_string()));
        put("dim", self.dim.map(|x| x.to_string()));
        put("s0", self.s0.map(|x| x.to_string()));
        put("kappa", self.kappa.map(|x| x.to_string()));
        put("ell", self.ell.map(|x| x.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("window", self.window.clone());
        put("sweep", self.sweep.clone());
        put("threads", self.threads.map(|x| x.to_string()));
        v
    }

    fn config(&self) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                parse_pairs(&text)?
            }
            None => Vec::new(),
        };
        RunConfig::build(&file, &self.overrides())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common) = match &cli.command {
        Command::Eigen(c) => (Subcommand::Eigen, c),
        Command::Identities(c) => (Subcommand::Identities, c),
        Command::Pointwise(c) => (Subcommand::Pointwise, c),
        Command::Decay(c) => (Subcommand::Decay, c),
        Command::Profile(c) => (Subcommand::Profile, c),
        Command::Mgt(c) => (Subcommand::Mgt, c),
        Command::Report(c) => (Subcommand::Report, c),
    };
    let result = common.config().and_then(|cfg| run(sub, &cfg).map(|out| (cfg, out)));
    match result {
        Ok((cfg, out)) => {
            let failed: Vec<_> = out.checks.iter().filter(|c| !c.pass()).collect();
            eprintln!("{}: {} checks, {} failed; wrote {}", sub.name(), out.checks.len(), failed.len(), cfg.out.display());
            for c in &failed {
                eprintln!(
                    "  FAIL [{}] {} {}: {:.6e} not in [{:.6e}, {:.6e}]",
                    c.criterion, c.case, c.quantity, c.measured, c.lower, c.upper
                );
            }
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("platespec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
