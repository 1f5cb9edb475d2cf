//! Command-line drivers: configuration, the four run modes and output.

mod config;
mod output;
mod simulate;
mod soliton;
mod sweep;
mod verify;

use serde::Serialize;

pub use config::{
    merge, Format, InitSpec, LatticeConfig, Mode, ModelSpec, OutputConfig, Overrides, Picture, Preset, RunConfig,
    SolitonConfig, SweepConfig, TimeConfig, VerifyConfig,
};
pub use output::{emit, site_label, to_json, Table};
pub use simulate::{run_simulate, simulate, SimulateReport};
pub use soliton::{run_soliton, soliton_grid, SolitonReport};
pub use sweep::{run_sweep, SweepEntry};
pub use verify::{battery, run_verify, Check, VerifySettings};

use crate::error::Result;

/// Result of a run that completed without a hard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub mode: Mode,
    /// `false` when a residual or identity exceeded its tolerance.
    pub passed: bool,
    pub message: String,
}

impl Outcome {
    /// 0 when passed, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            3
        }
    }
}

/// Validates `cfg` and dispatches on its mode.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match cfg.mode()? {
        Mode::Simulate => run_simulate(cfg),
        Mode::Soliton => run_soliton(cfg),
        Mode::Verify => run_verify(cfg),
        Mode::Sweep => run_sweep(cfg),
    }
}

/// Exit status for a finished run or its error.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}
