//! Batch front-end: scenario files in, text reports and CSV series out.
//!
//! A scenario declares a scale, nets, boxes and a list of tasks
//! ([`load_scenario`]); [`run_scenario`] executes the tasks in declaration
//! order and collects a [`Report`] whose exit code is 0 when every task
//! passes, 1 on any failure and 2 when some task is undecided.

pub mod format;
mod run;
pub mod scenario;

pub use run::{run_scenario, Report, TaskReport};
pub use scenario::{load_scenario, parse_scenario, Kind, Outcome, Overrides, Scenario, ScenarioError};
