//! Library half of the command-line runner: model-file loading and report
//! serialization, shared with the integration tests.

pub mod model;
pub mod report;
