//! Target-file parsing, report emission, and subcommand logic for the
//! exact orbifold invariant calculator; the `orbigw` binary is a thin
//! wrapper over this crate.

pub mod emit;
pub mod parallel;
pub mod runner;
pub mod schema;
