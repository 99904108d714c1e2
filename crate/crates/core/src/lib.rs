//! Simulation and analysis toolkit for subarray-partitioned, 1-bit
//! (current-reversal) reconfigurable intelligent surfaces around 100 GHz.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: element lattice, subarray partitioning, angle conventions
//! - [`unitcell`]: two-state cross-polarized reflection model
//! - [`field`]: plane-wave illumination, far-field synthesis and pattern metrics
//! - [`codebook`]: steering profiles, 1-bit quantization, SP3T beam templates
//!   and subarray state search
//! - [`budget`]: switch loss, bond-wire parasitics, DC power and far-field checks
//! - [`control`]: SP3T driver state machine and time-modulated schedules
//! - [`cli`]: scenario configuration, orchestration and CSV/text reports
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod cli;
pub mod codebook;
pub mod control;
pub mod error;
pub mod field;
pub mod geometry;
pub mod unitcell;

pub use error::{Error, Result};
