//! Scenario-driven front end for `qmsets`.
//!
//! A scenario declares universes, bases, attributes, groups, maps,
//! partitions and states, then lists commands. [`parse_scenario`] checks the
//! declarations and [`run_scenario`] executes the commands, each producing a
//! [`Report`] that renders as aligned text, CSV or JSON records.

pub mod lattice;
pub mod render;
pub mod run;
pub mod scenario;

pub use lattice::{lattice_render, Lattice};
pub use render::{Format, Report, Table};
pub use run::{run_scenario, Run, RunError, RunOptions};
pub use scenario::{parse_scenario, parse_syntax, Bounds, Scenario, ScenarioError};

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const SCENARIO: u8 = 2;
    pub const RUNTIME: u8 = 3;
}
