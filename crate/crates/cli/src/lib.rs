//! Model file format, result documents and the `wmp` command-line driver.

pub mod commands;
pub mod format;
pub mod output;

pub use commands::{run, Outcome};
