//! Document format, command line, seeded instance generation and reports for
//! the `mechbench` workbench.

pub mod cli;
pub mod document;
pub mod fuzz;
pub mod generate;
pub mod report;
