//! Command-line pipelines over the `bnb_assess` library: simulate runs from
//! a manifest, compute measures from traces, and render profiles and
//! reports.

pub mod cli;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod table;

pub use cli::run;
