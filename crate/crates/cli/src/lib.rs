//! Command-line front end: configuration, CSV and SVG output, and the
//! subcommands of the `braggstack` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;
pub mod verify;

pub use commands::{load_config, RunContext};
pub use config::{parse_config, RunConfig};
pub use error::CliError;
