//! Library surface of the `rankci` command-line tool, exposed so the test
//! suites can drive commands directly.

pub mod commands;
pub mod document;
pub mod error;
pub mod input;
pub mod sse;

pub use commands::{
    cmd_ci, cmd_rank, cmd_simulate, cmd_sse_builtin, cmd_sse_external, coverage_csv,
    load_scenario_file, parse_m_values, per_entity_csv, truth_table_csv,
};
pub use document::{ReportMode, ResultRecord, ResultsDocument, RESULTS_HEADER};
pub use error::CliError;
pub use input::{parse_input, parse_input_str};
pub use sse::{sse_against_ballots, SseReport};
