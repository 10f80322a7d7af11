//! A seeded 0/1-knapsack branch-and-bound solver and a discrete-event
//! simulator of its execution on `N` virtual cores.
//!
//! All times are simulated: node processing costs come from a seeded stream,
//! so every run is reproducible and variability across seeds is a modeled
//! effect. Emitted traces use the canonical format of [`crate::trace`].

mod instance;
mod parallel;
mod record;
mod sequential;
mod tree;

pub use instance::{
    brute_force_knapsack, generate_instance, InstanceFamily, KnapsackInstance, BRUTE_FORCE_MAX_ITEMS,
};
pub use parallel::simulate_parallel;
pub use sequential::solve_sequential;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOrder {
    /// Largest bound first; ties broken by the seeded node key.
    #[default]
    BestFirst,
    /// Deepest node first, then largest bound, then node key.
    DepthFirst,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WorkloadMode {
    /// Branch-and-bound over the instance's search tree.
    #[default]
    TreeSearch,
    /// `tasks` equal, independent units of work: no pruning, no
    /// dependencies. Useful as a perfectly scalable reference.
    IndependentTasks { tasks: u64 },
}

/// Solver and machine parameters. Times are in simulated seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Solver id written to traces.
    pub label: String,
    pub cores: u32,
    /// Seed of the node-cost jitter stream.
    pub seed: u64,
    pub node_cost_mean: f64,
    /// Relative spread of node costs, in `[0, 1)`.
    pub node_cost_jitter: f64,
    /// Cost of fetching a node from the central pool.
    pub comm_latency: f64,
    /// Interval between incumbent broadcasts; 0 publishes immediately.
    pub bound_broadcast_period: f64,
    pub search_order: SearchOrder,
    /// Seed of the structural node keys used to break priority ties.
    pub tie_break_seed: u64,
    pub workload_mode: WorkloadMode,
    pub time_limit: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            label: "knapsack-bnb".into(),
            cores: 1,
            seed: 0,
            node_cost_mean: 1e-3,
            node_cost_jitter: 0.0,
            comm_latency: 0.0,
            bound_broadcast_period: 0.0,
            search_order: SearchOrder::BestFirst,
            tie_break_seed: 0,
            workload_mode: WorkloadMode::TreeSearch,
            time_limit: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("{}: {what}", self.label)));
        if self.cores == 0 {
            return bad("cores must be at least 1");
        }
        if !(self.node_cost_mean > 0.0 && self.node_cost_mean.is_finite()) {
            return bad("node_cost_mean must be positive");
        }
        if !(0.0..1.0).contains(&self.node_cost_jitter) {
            return bad("node_cost_jitter must lie in [0, 1)");
        }
        if !(self.comm_latency >= 0.0 && self.comm_latency.is_finite()) {
            return bad("comm_latency must be non-negative");
        }
        if !(self.bound_broadcast_period >= 0.0 && self.bound_broadcast_period.is_finite()) {
            return bad("bound_broadcast_period must be non-negative");
        }
        if let WorkloadMode::IndependentTasks { tasks: 0 } = self.workload_mode {
            return bad("independent_tasks needs at least one task");
        }
        if let Some(limit) = self.time_limit {
            if !(limit > 0.0) {
                return bad("time_limit must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trace: Trace,
    /// Best solution value found; the optimum unless the time limit hit.
    pub optimal_value: f64,
    /// Sorted indices of the chosen items.
    pub solution: Vec<usize>,
}

/// Runs [`simulate_parallel`] once per seed, overriding `config.seed`.
pub fn seed_sweep(instance: &KnapsackInstance, config: &SimConfig, seeds: &[u64]) -> Result<Vec<SimResult>> {
    if seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }
    seeds
        .iter()
        .map(|&seed| {
            let cfg = SimConfig {
                seed,
                ..config.clone()
            };
            simulate_parallel(instance, &cfg)
        })
        .collect()
}
