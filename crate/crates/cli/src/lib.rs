//! Scenario ingestion, suite execution and report emission for the
//! polysym checkers. See docs/FORMATS.md at the repository root for the
//! scenario file format and the structured report schema.

pub mod expr;
pub mod render;
pub mod runner;
pub mod scenario;

pub use render::{render_structured, render_text, ScenarioReport};
pub use runner::{run_scenario, SuiteFilter};
pub use scenario::{parse_scenario, Scenario};
