//! Declarative scenario files and the reports produced from them.
//!
//! A scenario is a TOML document (see `scenarios/` in the repository root
//! for the grammar by example). Unknown keys are rejected. Missing `mc`,
//! `report` and `validation` blocks are filled with defaults.

mod config;
mod emit;
mod error;
mod report;

pub use config::{
    bundled, parse_scenario, DoseResponseConfig, LoadOptions, McConfig, Override, ReportConfig, ScenarioConfig, Spread,
    ValidationConfig, BUNDLED, DEFAULT_HISTOGRAM_BINS, DEFAULT_QUANTILES,
};
pub use config::{load_scenario, load_scenario_with, resolve_scenario};
pub use emit::{emit_report, format_sig, parse_json_report, render_json, render_report, Format};
pub use error::ScenarioError;
pub use report::{run_scenario, run_scenario_detailed, run_scenario_with, Provenance, QuantileValue, ReportBundle};
