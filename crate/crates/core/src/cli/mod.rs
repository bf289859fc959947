//! Experiment driver: JSON config in, CSV table and text summary out.

mod config;
mod scenarios;

use std::fs;
use std::path::Path;

pub use config::{ExperimentConfig, FactorKind, FactorSpec};
pub use scenarios::{
    run_density, run_estimate, run_norm, run_remark2, run_sketch, run_theorem1, RunReport,
    DEFAULT_DENSITY_ITERATIONS, DISTORTION_SLACK, SKETCH_LIMIT,
};

use crate::error::Result;

/// The CLI subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Norm,
    Estimate,
    Density,
    Embed,
    Remark2,
    Sketch,
}

impl Command {
    pub fn run(self, cfg: &ExperimentConfig) -> Result<RunReport> {
        match self {
            Command::Norm => run_norm(cfg),
            Command::Estimate => run_estimate(cfg),
            Command::Density => run_density(cfg),
            Command::Embed => run_theorem1(cfg),
            Command::Remark2 => run_remark2(cfg),
            Command::Sketch => run_sketch(cfg),
        }
    }
}

/// Writes `<name>.csv` and `<name>_summary.txt` into `dir`.
pub fn write_report(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{}.csv", report.name)), &report.csv)?;
    fs::write(dir.join(format!("{}_summary.txt", report.name)), &report.summary)?;
    Ok(())
}
