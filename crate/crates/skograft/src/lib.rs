//! File formats, rendering and the command line driver for the
//! `skograft-core` prover, translator and checker.

pub mod cli;
pub mod format;
pub mod pretty;
pub mod problem;

pub use format::{read_gs3, read_tableau, write_gs3, write_tableau, FormatError};
pub use problem::parse_problem;
