//! Experiment orchestration and report plumbing behind the `ggx` binary.

pub mod experiments;
pub mod report;
