//! Command-line driver: configuration, experiments and report output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod run;
pub mod sweep;
pub mod table;
