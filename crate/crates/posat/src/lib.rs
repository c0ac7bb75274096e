//! Command line plumbing around `posat-core`: timed runs, the benchmark matrix and reports.

pub mod bench;
pub mod report;
pub mod run;
