//! Library half of the qdynmap CLI: grid evaluation and output formatting,
//! kept separate from argument parsing so the acceptance tests can drive
//! the exact code paths the binary uses.

pub mod format;
pub mod grid;
