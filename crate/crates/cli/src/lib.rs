#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Harness around the `altmin` solvers: TOML run configs, CSV traces,
//! certificate reports and the data for the method comparison figure.

pub mod config;
pub mod error;
pub mod figure;
pub mod run;
pub mod trace;
pub mod verify;

pub use config::{RunConfig, OUT_DIR_ENV};
pub use error::CliError;
