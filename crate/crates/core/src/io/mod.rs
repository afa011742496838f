//! File formats and presentation: scenario files, result documents, SVG
//! geometry, parameter sweeps and the human summary table.

pub mod precise;
pub mod result;
pub mod scenario_file;
pub mod summary;
pub mod svg;
pub mod sweep;

pub use result::{OracleComparison, ResultDocument, RESULT_SCHEMA};
pub use scenario_file::{export_scenario, parse_scenario, SCENARIO_SCHEMA};
pub use summary::summary_table;
pub use svg::render_geometry;
pub use sweep::{SweepParameter, SweepRow};
