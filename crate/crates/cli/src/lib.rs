//! Batch verification, proving, recognition and summation front end.

pub mod commands;
pub mod corpus;
pub mod report;

pub use commands::{cmd_batch, cmd_prove, cmd_recognize, cmd_sum, verify_fixture, BatchOutcome, Settings};
pub use corpus::{load_corpus, parse_corpus, Fixture};
pub use report::{Report, Status, Timings};

/// Exit code when every fixture passes.
pub const EXIT_OK: u8 = 0;
/// Exit code when any fixture mismatches or errors.
pub const EXIT_MISMATCH: u8 = 1;
/// Exit code for usage and I/O errors.
pub const EXIT_USAGE: u8 = 2;
