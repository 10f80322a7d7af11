//! Efficiency and scalability assessment for branch-and-bound runs.
//!
//! - [`trace`]: run traces, the `.bbt` file format and validation.
//! - [`measures`]: gaps, time-to-criterion, the primal-dual integral, work,
//!   overhead, speed-up and parallel efficiency.
//! - [`aggregate`]: means over a test set with censoring policies.
//! - [`profiles`]: performance, cumulative and speed-up profiles, rendered
//!   to SVG.
//! - [`sim`]: a seeded knapsack branch-and-bound solver and a discrete-event
//!   simulator of its parallel execution.

pub mod aggregate;
pub mod error;
pub mod measures;
pub mod profiles;
pub mod sim;
pub mod trace;

pub use error::{Error, Result};
