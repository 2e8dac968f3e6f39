//! Experiment driver for `umac-core`: JSON configurations, parallel trial
//! execution, PUPE sweeps, minimum-SNR search and result files.
//!
//! The `umac-sim` binary exposes the same functionality on the command line.

pub mod check;
pub mod config;
mod error;
pub mod experiment;
pub mod export;
pub mod grid;
pub mod runner;
pub mod search;

pub use error::{Result, SimError};
