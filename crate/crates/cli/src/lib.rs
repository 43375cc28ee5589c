//! Batch front-end for the `fburgers` simulator: configuration, commands and
//! file output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
mod plot;

pub use commands::{cmd_kernel, cmd_rate, cmd_simulate, cmd_verify, embedded_config, Outcome};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
