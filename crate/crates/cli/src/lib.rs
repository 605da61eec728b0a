//! File formats, seeded verification suites and run reports for
//! `wasserlab-core`, plus the `wasserlab` command-line driver.

pub mod formats;
pub mod report;
pub mod suites;

pub use report::{Assertion, Batch, Format, Quantity, RunReport};
pub use suites::{run_suite, suite_names, SuiteOptions, MONOTONE_ID};
