//! Scenario files, trajectory CSV, SVG charts and reports for the `harrod`
//! binary.

pub mod audit;
pub mod config;
pub mod csv;
pub mod plot;
pub mod report;
pub mod run;

pub use config::{parse_scenario, render_scenario};
pub use run::{run_scenario, RunOutputs, ScenarioRun, EXIT_CRISIS, EXIT_ERROR, EXIT_OK};
