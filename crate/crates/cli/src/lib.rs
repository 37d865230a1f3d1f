//! Scenario runner for the `liezal` toolkit.
//!
//! A scenario file names a group instance, a shipped family, a region and one of three tasks
//! (`marty-scan`, `zalcman`, `exp-verify`). Running it produces `report.json`, `timing.json`
//! and optional CSV tables under `grids/`.

pub mod config;
pub mod error;
pub mod format;
pub mod output;
pub mod run;

pub use config::{Overrides, ScenarioConfig, Task};
pub use error::CliError;
pub use run::{execute, run_scenario, Payload, ReportBundle, RunOutcome};
