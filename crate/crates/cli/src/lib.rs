//! Batch front-end: metric specs in, per-point certificates and a JSON
//! report out.

pub mod config;
pub mod error;
pub mod json;
pub mod report;
pub mod run;
pub mod selftest;

pub use config::{parse_metric_spec, Check, RunConfig, RunInputs, DEFAULT_CHECKS};
pub use error::{exit, CliError};
pub use report::{PointStatus, Report};
pub use run::{emit_report, run_certify, run_spectrum};
