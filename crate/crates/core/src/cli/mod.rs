//! Command-line front end: scenario configuration, orchestration and
//! deterministic CSV/text reports.
//!
//! Subcommands of the `ris` binary map onto [`commands`]: `pattern`,
//! `scenario`, `codebook`, `budget`, `power` and `schedule-check`. Exit
//! codes are 0 on success, 1 on validation errors and 2 on runtime errors
//! (see [`crate::Error::exit_code`]).

pub mod commands;
pub mod config;
pub mod export;
pub mod run;

pub use config::{parse_config, Scenario, SearchMethod};
pub use export::export;
pub use run::{calibrate_structural_floor, run_scenario, RunReport};
