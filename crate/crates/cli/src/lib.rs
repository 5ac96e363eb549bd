//! Scenario runner for `cvqkd-core`: rate sweeps, threshold solves, distances
//! and thermal-noise lookups, written as CSV or JSON for external plotting.

pub mod config;
pub mod run;
pub mod sweep;
pub mod table;

pub use config::{DirectionChoice, Format, Mode, Noise, Output, Scenario, SolveFor};
pub use run::{run, run_one};
pub use sweep::{Scale, Sweep, Variable};
pub use table::{Cell, Table};
