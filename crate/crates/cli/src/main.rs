use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lmg_cli::config::HGrid;
use lmg_cli::{emit, execute, CliError, Command, RunConfig};
use lmg_core::SyntheticPeak;

#[derive(Parser)]
#[command(name = "lmg", version, about = "Fidelity susceptibility of the LMG model by exact diagonalization")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write SVG plots next to the CSV.
    #[arg(long, global = true)]
    svg: bool,
    /// System sizes, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Anisotropies, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Option<Vec<f64>>,
    /// Field grid: `start:stop:points` or a comma separated list.
    #[arg(long, global = true)]
    h_grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// χ_F over the field grid for each size and anisotropy.
    Sweep {
        /// Add the broken-phase leading-term difference columns.
        #[arg(long)]
        inset: bool,
    },
    /// Locate the χ_F maximum for each size and anisotropy.
    Peak {
        #[arg(long)]
        synthetic: bool,
    },
    /// Fit μ and δ over the configured size windows.
    Scale {
        /// Use a synthetic peak with known exponents instead of diagonalization.
        #[arg(long)]
        synthetic: bool,
    },
    /// Data collapse of the peaks and the fitted ν.
    Collapse {
        #[arg(long)]
        synthetic: bool,
    },
    /// Diagonalization against the large-N closed forms.
    Analytic,
    /// Run the built-in oracle checks.
    Verify {
        /// Corrupt one off-diagonal sign first; the oracle checks must catch it.
        #[arg(long)]
        inject_sign_error: bool,
    },
}

fn parse_grid(s: &str) -> Result<HGrid, CliError> {
    let bad = || CliError::Config(format!("cannot parse h grid {s:?}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(HGrid::Range {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            stop: parts[1].trim().parse().map_err(|_| bad())?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
        })
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()
            .map(HGrid::Values)
    }
}

fn resolve(cli: &Cli) -> Result<(Command, RunConfig), CliError> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = &c.sizes {
        cfg.sizes = s.clone();
    }
    if let Some(g) = &c.gammas {
        cfg.gammas = g.clone();
    }
    if let Some(g) = &c.h_grid {
        cfg.h_grid = parse_grid(g)?;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.jobs.is_some() {
        cfg.jobs = c.jobs;
    }
    let synthetic = |cfg: &mut RunConfig, on: bool| {
        if on && cfg.synthetic.is_none() {
            cfg.synthetic = Some(SyntheticPeak::default());
        }
    };
    let command = match cli.command {
        Cmd::Sweep { inset } => {
            cfg.sweep.inset |= inset;
            Command::Sweep
        }
        Cmd::Peak { synthetic: s } => {
            synthetic(&mut cfg, s);
            Command::Peak
        }
        Cmd::Scale { synthetic: s } => {
            synthetic(&mut cfg, s);
            Command::Scale
        }
        Cmd::Collapse { synthetic: s } => {
            synthetic(&mut cfg, s);
            Command::Collapse
        }
        Cmd::Analytic => Command::Analytic,
        Cmd::Verify { inject_sign_error } => {
            cfg.verify.inject_sign_error |= inject_sign_error;
            Command::Verify
        }
    };
    Ok((command, cfg))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (command, cfg) = resolve(cli)?;
    let output = execute(command, &cfg)?;
    emit(command, &output, cli.common.out.as_deref(), cli.common.svg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
