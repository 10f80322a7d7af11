use bnb_assess::measures::{overhead_breakdown, parallel_efficiency, speedup};
use bnb_assess::sim::{
    brute_force_knapsack, generate_instance, seed_sweep, simulate_parallel, solve_sequential,
    InstanceFamily, SearchOrder, SimConfig, WorkloadMode,
};
use bnb_assess::trace::{emit_trace, parse_trace, to_micros, validate_trace};

fn nodes(r: &bnb_assess::sim::SimResult) -> u64 {
    r.trace.work.unwrap().nodes_processed
}

#[test]
fn every_config_returns_the_oracle_optimum() {
    for seed in 0..16u64 {
        let family = if seed % 2 == 0 {
            InstanceFamily::Uncorrelated
        } else {
            InstanceFamily::StronglyCorrelated
        };
        let inst = generate_instance(family, 6 + (seed as usize % 14), seed).unwrap();
        let best = brute_force_knapsack(&inst).unwrap().0;
        assert_eq!(solve_sequential(&inst, &SimConfig::default()).unwrap().optimal_value, best);
        for cores in [1, 2, 4, 8] {
            for order in [SearchOrder::BestFirst, SearchOrder::DepthFirst] {
                let cfg = SimConfig {
                    cores,
                    seed,
                    node_cost_jitter: 0.3,
                    comm_latency: 1e-4,
                    bound_broadcast_period: if cores > 2 { 1e-3 } else { 0.0 },
                    search_order: order,
                    ..Default::default()
                };
                let r = simulate_parallel(&inst, &cfg).unwrap();
                assert_eq!(r.optimal_value, best, "{} {cfg:?}", inst.id);
                assert!(validate_trace(&r.trace).is_empty());
                let b = overhead_breakdown(&r.trace).unwrap();
                assert_eq!(b.total_us(), i64::from(cores) * to_micros(r.trace.run.wall_time));
            }
        }
    }
}

#[test]
fn uncorrelated_twenty_items_seed_seven() {
    let inst = generate_instance(InstanceFamily::Uncorrelated, 20, 7).unwrap();
    let best = brute_force_knapsack(&inst).unwrap();
    let r = solve_sequential(&inst, &SimConfig::default()).unwrap();
    assert_eq!(r.optimal_value, best.0);
    assert_eq!(inst.value_of(&r.solution), best.0);
}

#[test]
fn traces_survive_the_file_format() {
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 16, 2).unwrap();
    let cfg = SimConfig {
        cores: 4,
        comm_latency: 2e-4,
        node_cost_jitter: 0.5,
        seed: 3,
        ..Default::default()
    };
    let r = simulate_parallel(&inst, &cfg).unwrap();
    let text = emit_trace(&r.trace);
    assert_eq!(parse_trace(&text).unwrap(), r.trace);
}

#[test]
fn jitter_seeds_change_the_search() {
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 40, 0).unwrap();
    let cfg = SimConfig {
        cores: 4,
        node_cost_jitter: 0.5,
        comm_latency: 1e-4,
        search_order: SearchOrder::DepthFirst,
        ..Default::default()
    };
    let runs = seed_sweep(&inst, &cfg, &[0, 1, 2, 3, 4]).unwrap();
    let mut counts: Vec<u64> = runs.iter().map(nodes).collect();
    counts.sort_unstable();
    counts.dedup();
    assert!(counts.len() >= 2, "{counts:?}");
}

#[test]
fn parallel_node_counts_move_both_ways() {
    // Against the sequential tree, some seeds find the incumbent late and
    // search more, others find it early and search less.
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 40, 0).unwrap();
    let cfg = SimConfig {
        cores: 4,
        node_cost_jitter: 0.5,
        comm_latency: 1e-4,
        search_order: SearchOrder::DepthFirst,
        ..Default::default()
    };
    let seq = solve_sequential(&inst, &SimConfig { cores: 1, ..cfg.clone() }).unwrap();
    let base = nodes(&seq);
    let runs = seed_sweep(&inst, &cfg, &[0, 1, 2, 3, 4]).unwrap();
    let counts: Vec<u64> = runs.iter().map(nodes).collect();
    assert!(counts.iter().any(|&c| c > base), "{base} vs {counts:?}");
    assert!(counts.iter().any(|&c| c < base), "{base} vs {counts:?}");
}

#[test]
fn zero_jitter_seeds_agree() {
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 20, 2).unwrap();
    let cfg = SimConfig {
        cores: 4,
        comm_latency: 1e-4,
        search_order: SearchOrder::DepthFirst,
        ..Default::default()
    };
    let runs = seed_sweep(&inst, &cfg, &[1, 2, 3]).unwrap();
    for r in &runs[1..] {
        assert_eq!(r.trace.bounds, runs[0].trace.bounds);
        assert_eq!(r.trace.core_activity, runs[0].trace.core_activity);
        assert_eq!(r.trace.work, runs[0].trace.work);
    }
}

#[test]
fn delayed_broadcasts_do_not_shrink_best_first_trees() {
    for seed in 0..12u64 {
        for family in [InstanceFamily::Uncorrelated, InstanceFamily::StronglyCorrelated] {
            let inst = generate_instance(family, 24, seed).unwrap();
            let base = SimConfig {
                cores: 4,
                seed,
                node_cost_jitter: 0.5,
                comm_latency: 1e-4,
                ..Default::default()
            };
            let immediate = nodes(&simulate_parallel(&inst, &base).unwrap());
            for period in [1e-3, 5e-3] {
                let cfg = SimConfig {
                    bound_broadcast_period: period,
                    ..base.clone()
                };
                assert!(nodes(&simulate_parallel(&inst, &cfg).unwrap()) >= immediate, "{}", inst.id);
            }
        }
    }
}

#[test]
fn independent_tasks_scale_perfectly() {
    let inst = generate_instance(InstanceFamily::Uncorrelated, 10, 0).unwrap();
    let run = |cores| {
        let cfg = SimConfig {
            cores,
            workload_mode: WorkloadMode::IndependentTasks { tasks: 1000 },
            ..Default::default()
        };
        simulate_parallel(&inst, &cfg).unwrap().trace.run.wall_time
    };
    let t1 = run(1);
    for n in [2, 4, 8] {
        let s = speedup(t1, run(n)).unwrap();
        assert_eq!(s, f64::from(n));
        assert_eq!(parallel_efficiency(s, n), 1.0);
    }
    // 1000 tasks on 3 cores: ceil(1000 / 3) rounds.
    assert_eq!(run(3), 0.334);
}

#[test]
fn latency_costs_efficiency_on_large_trees() {
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 20, 0).unwrap();
    let run = |cores| {
        let cfg = SimConfig {
            cores,
            comm_latency: 1e-4,
            ..Default::default()
        };
        simulate_parallel(&inst, &cfg).unwrap()
    };
    let one = run(1);
    assert!(nodes(&one) >= 1000);
    for n in [2, 4, 8] {
        let s = speedup(one.trace.run.wall_time, run(n).trace.run.wall_time).unwrap();
        assert!(parallel_efficiency(s, n) < 1.0);
    }
}
