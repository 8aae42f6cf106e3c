//! Experiment runner library behind the `latspec` binary: CSV emission,
//! config parsing, the per-kind experiment executors, and the acceptance
//! suite.

pub mod accept;
pub mod config;
pub mod csvout;
pub mod report;
pub mod runner;
