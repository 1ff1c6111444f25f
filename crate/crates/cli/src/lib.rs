//! Batch front end for `pathtransport`: declarative scenario files, JSON
//! run reports and CSV traces.

pub mod report;
pub mod scenario;

pub use report::{export_trace, run_scenario, write_trace, RunError, RunReport, Trace, TraceError};
pub use scenario::{load_scenario, parse_scenario, Scenario, ScenarioError};
