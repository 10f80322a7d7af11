//! Trace recording and node-cost sampling shared by both solvers.
//! Simulated time is kept in integer microseconds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tree::BoundSet;
use super::SimConfig;
use crate::trace::{from_micros, to_micros, BoundEvent, CoreInterval, CoreState};

/// Seeded node processing costs in microseconds.
pub(crate) struct CostStream {
    rng: ChaCha8Rng,
    mean_us: f64,
    jitter: f64,
}

impl CostStream {
    pub fn new(cfg: &SimConfig) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            mean_us: cfg.node_cost_mean * 1e6,
            jitter: cfg.node_cost_jitter,
        }
    }

    pub fn next(&mut self) -> i64 {
        let u: f64 = self.rng.gen_range(-1.0..1.0);
        ((self.mean_us * (1.0 + self.jitter * u)).round() as i64).max(1)
    }
}

pub(crate) fn limit_micros(cfg: &SimConfig) -> Option<i64> {
    cfg.time_limit.map(to_micros)
}

/// Primal/dual history for a maximization run. Changes at the same time
/// are coalesced; unchanged states are not recorded.
pub(crate) struct BoundRecorder {
    events: Vec<(i64, f64, f64)>,
    last: (f64, f64),
}

impl BoundRecorder {
    pub fn new() -> Self {
        Self {
            events: Vec::new(),
            last: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Records the global state: the dual bound is the largest bound over
    /// open and in-flight work, and never below the incumbent.
    pub fn observe(&mut self, t: i64, incumbent: f64, open: &BoundSet) {
        let dual = open.max().map_or(incumbent, |b| b.max(incumbent)).min(self.last.1);
        let state = (incumbent, dual);
        if state == self.last {
            return;
        }
        match self.events.last_mut() {
            Some(e) if e.0 == t => {
                e.1 = state.0;
                e.2 = state.1;
                let n = self.events.len();
                let before = if n >= 2 {
                    (self.events[n - 2].1, self.events[n - 2].2)
                } else {
                    (f64::NEG_INFINITY, f64::INFINITY)
                };
                if before == state {
                    self.events.pop();
                }
            }
            _ => self.events.push((t, state.0, state.1)),
        }
        self.last = state;
    }

    pub fn finish(self) -> Vec<BoundEvent> {
        self.events
            .into_iter()
            .map(|(t, p, d)| BoundEvent::new(from_micros(t), p, d))
            .collect()
    }
}

/// Per-core state intervals; zero-length intervals are dropped and
/// adjacent intervals of the same kind merged.
pub(crate) struct ActivityRecorder {
    cores: Vec<(CoreState, i64)>,
    intervals: Vec<Vec<(i64, i64, CoreState)>>,
}

impl ActivityRecorder {
    pub fn new(cores: usize) -> Self {
        Self {
            cores: vec![(CoreState::Idle, 0); cores],
            intervals: vec![Vec::new(); cores],
        }
    }

    pub fn set(&mut self, core: usize, t: i64, state: CoreState) {
        let (prev, since) = self.cores[core];
        if prev == state {
            return;
        }
        self.close(core, since, t, prev);
        self.cores[core] = (state, t);
    }

    fn close(&mut self, core: usize, start: i64, end: i64, kind: CoreState) {
        if end <= start {
            return;
        }
        let list = &mut self.intervals[core];
        match list.last_mut() {
            Some(last) if last.2 == kind && last.1 == start => last.1 = end,
            _ => list.push((start, end, kind)),
        }
    }

    pub fn finish(mut self, t_end: i64) -> Vec<CoreInterval> {
        for core in 0..self.cores.len() {
            let (state, since) = self.cores[core];
            self.close(core, since, t_end, state);
        }
        self.intervals
            .into_iter()
            .enumerate()
            .flat_map(|(core, list)| {
                list.into_iter().map(move |(s, e, k)| {
                    CoreInterval::new(core as u32, from_micros(s), from_micros(e), k)
                })
            })
            .collect()
    }
}
