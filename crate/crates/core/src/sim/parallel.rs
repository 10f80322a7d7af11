//! Discrete-event simulation of a central-pool parallel branch-and-bound.
//!
//! Idle cores fetch work from a shared pool, paying `comm_latency` per
//! fetch. A core that improves the incumbent knows it at once; other cores
//! see it only once published, immediately or at the next broadcast tick.
//! Nodes that a stale incumbent fails to prune are processed anyway, which
//! is how redundant work arises.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::record::{limit_micros, ActivityRecorder, BoundRecorder, CostStream};
use super::sequential::solve_sequential;
use super::tree::{cannot_improve, evaluate, BoundSet, Node, Pool, Prepared, Priority};
use super::{KnapsackInstance, SimConfig, SimResult, WorkloadMode};
use crate::error::Result;
use crate::trace::{from_micros, to_micros, CoreState, RunRecord, Sense, Status, Trace, WorkCounters};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Event {
    FetchDone(usize),
    WorkDone(usize),
    Broadcast,
}

enum Item {
    Node(Node),
    Task,
}

struct Core {
    /// Work held by the core (fetching or processing) and its pool bound.
    holding: Option<(f64, Item)>,
    /// Best incumbent value this core knows of.
    known: f64,
}

struct Sim<'a> {
    cfg: &'a SimConfig,
    prep: Prepared,
    costs: CostStream,
    latency: i64,
    period: i64,
    now: i64,
    seq: u64,
    events: BinaryHeap<Reverse<(i64, u64, Event)>>,
    pool: Pool<Item>,
    open: BoundSet,
    in_flight: usize,
    cores: Vec<Core>,
    incumbent: (f64, Vec<bool>),
    published: f64,
    work: WorkCounters,
    bounds: BoundRecorder,
    activity: ActivityRecorder,
    /// Independent-tasks mode: tasks left and the precomputed optimum.
    tasks_left: u64,
    final_solution: Option<(f64, Vec<bool>)>,
}

impl<'a> Sim<'a> {
    fn schedule(&mut self, at: i64, event: Event) {
        self.events.push(Reverse((at, self.seq, event)));
        self.seq += 1;
    }

    fn push(&mut self, bound: f64, item: Item, priority: Priority) {
        self.open.insert(bound);
        self.pool.push(priority, bound, item);
    }

    fn set_state(&mut self, core: usize, state: CoreState) {
        self.activity.set(core, self.now, state);
    }

    fn view(&self, core: usize) -> f64 {
        self.cores[core].known.max(self.published)
    }

    /// Hands pool work to idle cores in core-id order.
    fn dispatch(&mut self) {
        for core in 0..self.cores.len() {
            if self.cores[core].holding.is_some() {
                continue;
            }
            while let Some((bound, item)) = self.pool.pop() {
                if matches!(item, Item::Node(_)) && cannot_improve(bound, self.published) {
                    self.open.remove(bound);
                    continue;
                }
                self.cores[core].holding = Some((bound, item));
                self.in_flight += 1;
                self.set_state(core, CoreState::Communicating);
                self.schedule(self.now + self.latency, Event::FetchDone(core));
                break;
            }
            if self.pool.is_empty() {
                break;
            }
        }
    }

    fn release(&mut self, core: usize) -> (f64, Item) {
        let held = self.cores[core].holding.take().expect("core holds work");
        self.in_flight -= 1;
        self.open.remove(held.0);
        self.set_state(core, CoreState::Idle);
        held
    }

    fn fetch_done(&mut self, core: usize) {
        let (bound, is_node) = match &self.cores[core].holding {
            Some((b, item)) => (*b, matches!(item, Item::Node(_))),
            None => unreachable!("fetch completes on a holding core"),
        };
        if is_node && cannot_improve(bound, self.view(core)) {
            self.release(core);
            return;
        }
        let cost = self.costs.next();
        self.set_state(core, CoreState::Busy);
        self.schedule(self.now + cost, Event::WorkDone(core));
    }

    fn work_done(&mut self, core: usize) {
        let known = self.view(core);
        let (_, item) = self.release(core);
        self.work.nodes_processed += 1;
        self.work.bounding_problems += 1;
        match item {
            Item::Task => {
                self.work.iterations += 1;
                self.tasks_left -= 1;
                if self.tasks_left == 0 {
                    if let Some(best) = self.final_solution.take() {
                        self.improve(core, best);
                    }
                }
            }
            Item::Node(node) => {
                let ev = evaluate(&self.prep, &node, known);
                self.work.iterations += ev.iterations;
                if let Some(found) = ev.heuristic {
                    self.improve(core, found);
                }
                let known = self.view(core);
                for child in ev.children {
                    if !cannot_improve(child.bound, known) {
                        let priority = Priority::of(self.cfg.search_order, &child);
                        self.push(child.bound, Item::Node(child), priority);
                    }
                }
            }
        }
    }

    fn improve(&mut self, core: usize, found: (f64, Vec<bool>)) {
        let value = found.0;
        self.cores[core].known = self.cores[core].known.max(value);
        if value > self.incumbent.0 {
            self.incumbent = found;
            if self.period == 0 {
                self.published = self.incumbent.0;
            }
        }
    }

    fn finished(&self) -> bool {
        self.pool.is_empty() && self.in_flight == 0
    }

    fn run(&mut self, limit: Option<i64>) -> Status {
        if self.period > 0 {
            self.schedule(self.period, Event::Broadcast);
        }
        self.dispatch();
        self.bounds.observe(self.now, self.incumbent.0, &self.open);
        while !self.finished() {
            let Some(Reverse((at, _, event))) = self.events.pop() else {
                unreachable!("pending work always has a scheduled event");
            };
            if let Some(l) = limit {
                if at > l {
                    self.now = l;
                    return Status::TimeLimit;
                }
            }
            self.now = at;
            match event {
                Event::FetchDone(core) => self.fetch_done(core),
                Event::WorkDone(core) => self.work_done(core),
                Event::Broadcast => {
                    self.published = self.incumbent.0;
                    self.schedule(self.now + self.period, Event::Broadcast);
                }
            }
            self.dispatch();
            self.bounds.observe(self.now, self.incumbent.0, &self.open);
        }
        Status::Optimal
    }
}

/// Simulates `config.cores` cores sharing one node pool.
///
/// With one core and zero latency the search, and its trace, coincide with
/// [`solve_sequential`]. In independent-tasks mode every task costs one
/// node; the optimum (found beforehand by the sequential search) is
/// reported when the last task completes.
pub fn simulate_parallel(instance: &KnapsackInstance, config: &SimConfig) -> Result<SimResult> {
    instance.validate()?;
    config.validate()?;
    let prep = Prepared::new(instance);
    let n_cores = config.cores as usize;
    let period = match to_micros(config.bound_broadcast_period) {
        0 if config.bound_broadcast_period > 0.0 => 1,
        p => p,
    };
    let mut sim = Sim {
        cfg: config,
        costs: CostStream::new(config),
        latency: to_micros(config.comm_latency),
        period,
        now: 0,
        seq: 0,
        events: BinaryHeap::new(),
        pool: Pool::new(),
        open: BoundSet::default(),
        in_flight: 0,
        cores: (0..n_cores)
            .map(|_| Core {
                holding: None,
                known: f64::NEG_INFINITY,
            })
            .collect(),
        incumbent: (f64::NEG_INFINITY, Vec::new()),
        published: f64::NEG_INFINITY,
        work: WorkCounters::default(),
        bounds: BoundRecorder::new(),
        activity: ActivityRecorder::new(n_cores),
        tasks_left: 0,
        final_solution: None,
        prep,
    };

    let root = Node::root(sim.prep.len(), config.tie_break_seed);
    match config.workload_mode {
        WorkloadMode::TreeSearch => {
            let priority = Priority::of(config.search_order, &root);
            sim.push(root.bound, Item::Node(root), priority);
        }
        WorkloadMode::IndependentTasks { tasks } => {
            let sequential = SimConfig {
                workload_mode: WorkloadMode::TreeSearch,
                time_limit: None,
                ..config.clone()
            };
            let best = solve_sequential(instance, &sequential)?;
            let mut taken = vec![false; sim.prep.len()];
            for (pos, &item) in sim.prep.order.iter().enumerate() {
                taken[pos] = best.solution.contains(&item);
            }
            sim.final_solution = Some((best.optimal_value, taken));
            let ev = evaluate(&sim.prep, &root, f64::NEG_INFINITY);
            if let Some(found) = ev.heuristic {
                sim.incumbent = found;
                sim.published = sim.incumbent.0;
            }
            sim.tasks_left = tasks;
            for k in 0..tasks {
                sim.push(ev.bound, Item::Task, Priority::fifo(k));
            }
        }
    }

    let status = sim.run(limit_micros(config));
    let wall = sim.now;
    let solution = sim.prep.original_items(&sim.incumbent.1);
    let trace = Trace {
        run: RunRecord {
            instance_id: instance.id.clone(),
            solver_id: config.label.clone(),
            cores: config.cores,
            seed: config.seed,
            time_limit: config.time_limit.unwrap_or(f64::INFINITY),
            status,
            wall_time: from_micros(wall),
            sense: Sense::Max,
        },
        bounds: sim.bounds.finish(),
        work: Some(sim.work),
        core_activity: sim.activity.finish(wall),
    };
    Ok(SimResult {
        trace,
        optimal_value: instance.value_of(&solution),
        solution,
    })
}
