mod analytic;
mod collapse;
mod scale;
mod sweep;
mod verify;

pub use analytic::cmd_analytic;
pub use collapse::cmd_collapse;
pub use scale::{cmd_peak, cmd_scale};
pub use sweep::cmd_sweep;
pub use verify::cmd_verify;

use lmg_core::scaling::{ChiOracle, EdOracle};

use crate::config::RunConfig;
use crate::table::ResultTable;

/// Result of one command: the table plus any plots rendered from it.
#[derive(Debug, Clone)]
pub struct Output {
    pub table: ResultTable,
    /// `(file suffix, svg text)`; the suffix is empty for a single plot.
    pub plots: Vec<(String, String)>,
    /// Failed checks (`verify` only).
    pub failures: usize,
}

impl Output {
    fn new(table: ResultTable) -> Self {
        Output {
            table,
            plots: Vec::new(),
            failures: 0,
        }
    }
}

fn oracle(cfg: &RunConfig) -> Box<dyn ChiOracle> {
    match cfg.synthetic {
        Some(s) => Box::new(s),
        None => Box::new(EdOracle::new(cfg.fidelity)),
    }
}

fn bool_cell(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}
