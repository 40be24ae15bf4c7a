//! Batch driver for the LMG fidelity-susceptibility computations.
//!
//! Every command takes a [`RunConfig`] and returns a [`ResultTable`]; the
//! `lmg` binary writes it as CSV and optionally renders SVG plots.

pub mod commands;
pub mod config;
mod error;
pub mod oracle;
pub mod svg;
pub mod table;

use std::path::{Path, PathBuf};

pub use commands::Output;
pub use config::RunConfig;
pub use error::CliError;
pub use table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Peak,
    Scale,
    Collapse,
    Analytic,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Peak => "peak",
            Command::Scale => "scale",
            Command::Collapse => "collapse",
            Command::Analytic => "analytic",
            Command::Verify => "verify",
        }
    }
}

/// Run a command on a worker pool of `cfg.jobs` threads.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {:?} worker threads: {e}", cfg.jobs)))?;
    pool.install(|| match command {
        Command::Sweep => commands::cmd_sweep(cfg),
        Command::Peak => commands::cmd_peak(cfg),
        Command::Scale => commands::cmd_scale(cfg),
        Command::Collapse => commands::cmd_collapse(cfg),
        Command::Analytic => commands::cmd_analytic(cfg),
        Command::Verify => commands::cmd_verify(cfg),
    })
}

/// Where a plot goes: next to the CSV if there is one, else in the working directory.
pub fn plot_path(command: Command, out: Option<&Path>, suffix: &str) -> PathBuf {
    let stem = out
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("lmg-{}", command.name()));
    let name = if suffix.is_empty() {
        format!("{stem}.svg")
    } else {
        format!("{stem}_{suffix}.svg")
    };
    match out.and_then(|p| p.parent()) {
        Some(dir) => dir.join(name),
        None => PathBuf::from(name),
    }
}

/// Write the table and plots, and turn verification failures into an error.
pub fn emit(command: Command, output: &Output, out: Option<&Path>, svg: bool) -> Result<(), CliError> {
    output.table.write(out)?;
    if svg {
        for (suffix, text) in &output.plots {
            let path = plot_path(command, out, suffix);
            std::fs::write(&path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    if output.failures > 0 {
        return Err(CliError::VerifyFailed {
            failed: output.failures,
        });
    }
    Ok(())
}
