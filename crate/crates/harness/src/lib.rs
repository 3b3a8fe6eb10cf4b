//! Command-line front end: configuration, the figure experiments and
//! deterministic CSV/JSON output.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod table;

pub use error::{HarnessError, Result};
