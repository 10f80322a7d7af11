use std::path::PathBuf;

use bnb_assess::sim::{simulate_parallel, SimConfig};
use bnb_assess::trace::emit_trace;
use rayon::prelude::*;

use super::{create_dir, write_file, Context};
use crate::error::Result;

/// Replaces characters that are awkward in file names.
fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
        .collect()
}

pub fn trace_file_name(instance: &str, solver: &str, cores: u32, seed: u64) -> String {
    format!("{}__{}__c{cores}__s{seed}.bbt", sanitize(instance), sanitize(solver))
}

/// Runs the manifest's simulation plan and returns the written trace files
/// in plan order.
pub fn simulate(ctx: &Context) -> Result<Vec<PathBuf>> {
    let manifest = ctx.manifest()?;
    let instances = manifest.load_instances()?;
    let seeds = match ctx.seed_override {
        Some(k) => vec![k],
        None => manifest.seeds.clone(),
    };
    let mut jobs = Vec::new();
    for inst in &instances {
        for base in manifest.sim_configs() {
            for &cores in &manifest.core_counts {
                for &seed in &seeds {
                    let cfg = SimConfig {
                        cores,
                        seed,
                        time_limit: base.time_limit.or(Some(manifest.time_limit)),
                        ..base.clone()
                    };
                    jobs.push((inst, cfg));
                }
            }
        }
    }

    let dir = ctx.traces_dir()?;
    create_dir(&dir)?;
    let outputs: Vec<(PathBuf, String)> = jobs
        .par_iter()
        .map(|(inst, cfg)| {
            let r = simulate_parallel(inst, cfg)?;
            let name = trace_file_name(&inst.id, &cfg.label, cfg.cores, cfg.seed);
            Ok((dir.join(name), emit_trace(&r.trace)))
        })
        .collect::<Result<_>>()?;
    for (path, text) in &outputs {
        write_file(path, text)?;
    }
    println!("wrote {} traces to {}", outputs.len(), dir.display());
    Ok(outputs.into_iter().map(|(p, _)| p).collect())
}
