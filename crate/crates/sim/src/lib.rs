//! Monte Carlo harness, file formats and command line for `ramsp-core`.

pub mod checks;
pub mod cli;
pub mod harness;
pub mod instances;
pub mod io;
pub mod spec;
pub mod stats;
pub mod suite;
