use super::record::{limit_micros, ActivityRecorder, BoundRecorder, CostStream};
use super::tree::{cannot_improve, evaluate, BoundSet, Node, Pool, Prepared, Priority};
use super::{KnapsackInstance, SimConfig, SimResult};
use crate::error::Result;
use crate::trace::{from_micros, CoreState, RunRecord, Sense, Status, Trace, WorkCounters};

/// Single-core branch-and-bound with the fractional bound.
///
/// Uses `config`'s node costs, search order and tie-break seed; the core
/// count, latency and broadcast settings do not apply. The trace has one
/// busy interval covering the whole run.
pub fn solve_sequential(instance: &KnapsackInstance, config: &SimConfig) -> Result<SimResult> {
    instance.validate()?;
    config.validate()?;
    let prep = Prepared::new(instance);
    let mut costs = CostStream::new(config);
    let limit = limit_micros(config);

    let mut pool = Pool::new();
    let mut open = BoundSet::default();
    let root = Node::root(prep.len(), config.tie_break_seed);
    open.insert(root.bound);
    pool.push(Priority::of(config.search_order, &root), root.bound, root);

    let mut bounds = BoundRecorder::new();
    let mut work = WorkCounters::default();
    let mut incumbent = (f64::NEG_INFINITY, Vec::new());
    let mut now = 0i64;
    let mut status = Status::Optimal;

    while let Some((bound, node)) = pool.pop() {
        if cannot_improve(bound, incumbent.0) {
            open.remove(bound);
            bounds.observe(now, incumbent.0, &open);
            continue;
        }
        let done = now + costs.next();
        if limit.is_some_and(|l| done > l) {
            now = limit.unwrap_or(done);
            status = Status::TimeLimit;
            break;
        }
        now = done;
        let ev = evaluate(&prep, &node, incumbent.0);
        work.nodes_processed += 1;
        work.bounding_problems += 1;
        work.iterations += ev.iterations;
        if let Some((value, taken)) = ev.heuristic {
            if value > incumbent.0 {
                incumbent = (value, taken);
            }
        }
        open.remove(bound);
        for child in ev.children {
            if !cannot_improve(child.bound, incumbent.0) {
                open.insert(child.bound);
                pool.push(Priority::of(config.search_order, &child), child.bound, child);
            }
        }
        bounds.observe(now, incumbent.0, &open);
    }

    let mut activity = ActivityRecorder::new(1);
    activity.set(0, 0, CoreState::Busy);
    let trace = Trace {
        run: RunRecord {
            instance_id: instance.id.clone(),
            solver_id: config.label.clone(),
            cores: 1,
            seed: config.seed,
            time_limit: config.time_limit.unwrap_or(f64::INFINITY),
            status,
            wall_time: from_micros(now),
            sense: Sense::Max,
        },
        bounds: bounds.finish(),
        work: Some(work),
        core_activity: activity.finish(now),
    };
    let solution = prep.original_items(&incumbent.1);
    Ok(SimResult {
        trace,
        optimal_value: instance.value_of(&solution),
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{brute_force_knapsack, generate_instance, InstanceFamily, SearchOrder};
    use crate::trace::{emit_trace, validate_trace};

    fn classic() -> KnapsackInstance {
        KnapsackInstance {
            id: "classic".into(),
            values: vec![60.0, 100.0, 120.0],
            weights: vec![10.0, 20.0, 30.0],
            capacity: 50.0,
        }
    }

    #[test]
    fn classic_instance() {
        let r = solve_sequential(&classic(), &SimConfig::default()).unwrap();
        assert_eq!(r.optimal_value, 220.0);
        assert_eq!(r.solution, vec![1, 2]);
        assert!(r.trace.work.unwrap().nodes_processed >= 1);
        assert!(validate_trace(&r.trace).is_empty(), "{:?}", validate_trace(&r.trace));
    }

    #[test]
    fn integral_root_needs_one_node() {
        let inst = KnapsackInstance {
            id: "easy".into(),
            values: vec![5.0, 4.0, 3.0],
            weights: vec![1.0, 1.0, 1.0],
            capacity: 3.0,
        };
        let r = solve_sequential(&inst, &SimConfig::default()).unwrap();
        assert_eq!(r.trace.work.unwrap().nodes_processed, 1);
        assert_eq!(r.optimal_value, 12.0);
    }

    #[test]
    fn matches_oracle_for_both_orders() {
        for seed in 0..30 {
            for family in [InstanceFamily::Uncorrelated, InstanceFamily::StronglyCorrelated] {
                let inst = generate_instance(family, 5 + seed as usize % 12, seed).unwrap();
                let best = brute_force_knapsack(&inst).unwrap().0;
                for order in [SearchOrder::BestFirst, SearchOrder::DepthFirst] {
                    let cfg = SimConfig {
                        search_order: order,
                        tie_break_seed: seed,
                        ..Default::default()
                    };
                    let r = solve_sequential(&inst, &cfg).unwrap();
                    assert_eq!(r.optimal_value, best, "{} {order:?}", inst.id);
                    assert!(inst.weight_of(&r.solution) <= inst.capacity);
                    assert!(validate_trace(&r.trace).is_empty());
                }
            }
        }
    }

    #[test]
    fn deterministic_bytes() {
        let inst = generate_instance(InstanceFamily::StronglyCorrelated, 18, 2).unwrap();
        let cfg = SimConfig {
            node_cost_jitter: 0.3,
            seed: 11,
            ..Default::default()
        };
        let a = emit_trace(&solve_sequential(&inst, &cfg).unwrap().trace);
        let b = emit_trace(&solve_sequential(&inst, &cfg).unwrap().trace);
        assert_eq!(a, b);
    }

    #[test]
    fn time_limit_censors_run() {
        let inst = generate_instance(InstanceFamily::StronglyCorrelated, 20, 5).unwrap();
        let full = solve_sequential(&inst, &SimConfig::default()).unwrap();
        assert!(full.trace.work.unwrap().nodes_processed > 5);
        let cfg = SimConfig {
            time_limit: Some(0.0035),
            ..Default::default()
        };
        let r = solve_sequential(&inst, &cfg).unwrap();
        assert_eq!(r.trace.run.status, Status::TimeLimit);
        assert_eq!(r.trace.run.wall_time, 0.0035);
        assert_eq!(r.trace.work.unwrap().nodes_processed, 3);
        assert!(validate_trace(&r.trace).is_empty(), "{:?}", validate_trace(&r.trace));
    }
}
