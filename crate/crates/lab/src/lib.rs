//! Harness around `usvp-core`: lattice file I/O, seeded corpora, JSON-lines
//! reports, the command dispatcher and the acceptance suite.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod format;
pub mod report;
pub mod suite;

pub use commands::{run, Command, RunConfig, RunOutcome};
pub use error::LabError;
