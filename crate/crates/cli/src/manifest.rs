//! Experiment manifests: one JSON file describing a complete run plan.
//!
//! ```json
//! {
//!   "instances": [
//!     {"file": "instances/a.json"},
//!     {"generate": {"family": "strongly_correlated", "n_items": 20, "seed": 7}}
//!   ],
//!   "solver_configs": [
//!     {"config": {"label": "bf", "comm_latency": 0.0001}},
//!     {"traces": "external/other-solver"}
//!   ],
//!   "core_counts": [1, 2, 4, 8],
//!   "seeds": [0, 1, 2],
//!   "time_limit": 60.0,
//!   "output_dir": "out"
//! }
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use bnb_assess::sim::{generate_instance, InstanceFamily, KnapsackInstance, SimConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    File(PathBuf),
    Generate {
        family: InstanceFamily,
        n_items: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverSpec {
    /// Simulated solver.
    Config(SimConfig),
    /// Directory of `.bbt` traces produced elsewhere.
    Traces(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub instances: Vec<InstanceSpec>,
    pub solver_configs: Vec<SolverSpec>,
    pub core_counts: Vec<u32>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Applied to simulated runs whose config sets no limit of its own.
    pub time_limit: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Manifest {
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, String> {
        let mut m: Manifest = serde_json::from_str(text).map_err(|e| e.to_string())?;
        m.resolve(base);
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|message| CliError::Manifest {
            path: path.to_path_buf(),
            message,
        })
    }

    fn resolve(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for spec in &mut self.instances {
            if let InstanceSpec::File(p) = spec {
                join(p);
            }
        }
        for spec in &mut self.solver_configs {
            if let SolverSpec::Traces(p) = spec {
                join(p);
            }
        }
        join(&mut self.output_dir);
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.instances.is_empty() {
            return Err("instance list is empty".into());
        }
        if self.solver_configs.is_empty() {
            return Err("solver_configs is empty".into());
        }
        if self.core_counts.is_empty() {
            return Err("core_counts is empty".into());
        }
        if self.core_counts.contains(&0) {
            return Err("core counts must be at least 1".into());
        }
        if self.core_counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err("core_counts must be strictly ascending".into());
        }
        if self.seeds.is_empty() {
            return Err("seed list is empty".into());
        }
        if !(self.time_limit > 0.0) {
            return Err("time_limit must be positive".into());
        }
        let mut labels = BTreeSet::new();
        for cfg in self.sim_configs() {
            if !labels.insert(cfg.label.as_str()) {
                return Err(format!("duplicate solver label `{}`", cfg.label));
            }
            if cfg.label.contains("__") {
                return Err(format!("solver label `{}` must not contain `__`", cfg.label));
            }
            cfg.validate().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn sim_configs(&self) -> impl Iterator<Item = &SimConfig> {
        self.solver_configs.iter().filter_map(|s| match s {
            SolverSpec::Config(c) => Some(c),
            SolverSpec::Traces(_) => None,
        })
    }

    pub fn trace_dirs(&self) -> impl Iterator<Item = &Path> {
        self.solver_configs.iter().filter_map(|s| match s {
            SolverSpec::Traces(p) => Some(p.as_path()),
            SolverSpec::Config(_) => None,
        })
    }

    /// Loads or generates every instance, rejecting duplicate ids.
    pub fn load_instances(&self) -> Result<Vec<KnapsackInstance>> {
        let mut out = Vec::with_capacity(self.instances.len());
        let mut ids = BTreeSet::new();
        for spec in &self.instances {
            let inst = match spec {
                InstanceSpec::File(p) => KnapsackInstance::read(p).map_err(|e| {
                    CliError::Data(format!("{}: {e}", p.display()))
                })?,
                InstanceSpec::Generate {
                    family,
                    n_items,
                    seed,
                } => generate_instance(*family, *n_items, *seed)?,
            };
            if !ids.insert(inst.id.clone()) {
                return Err(CliError::Data(format!("duplicate instance id `{}`", inst.id)));
            }
            out.push(inst);
        }
        Ok(out)
    }

    pub fn traces_dir(&self) -> PathBuf {
        self.output_dir.join("traces")
    }
}
