//! Command-line front end: configuration files, sweeps, figure presets and
//! the expectation table.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod expect;
pub mod experiment;
pub mod presets;
