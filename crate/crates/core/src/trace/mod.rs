//! Run traces: the time-stamped record of one branch-and-bound run.
//!
//! A [`Trace`] holds the run identity, the primal/dual bound history, the
//! final work counters and (for parallel runs) per-core activity intervals.
//! Every measure in [`crate::measures`] is a pure function over a trace.

mod format;
pub(crate) mod validate;

pub use format::{emit_trace, parse_trace, read_trace_file, write_trace_file};
pub use validate::{validate_trace, Violation, ViolationKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trace times are stored with microsecond resolution.
pub const TIME_RESOLUTION: f64 = 1e-6;

/// Rounds seconds to whole microseconds.
pub fn to_micros(t: f64) -> i64 {
    (t * 1e6).round() as i64
}

pub fn from_micros(us: i64) -> f64 {
    us as f64 / 1e6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    GapLimit,
    TimeLimit,
    FirstSolution,
    Aborted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::GapLimit => "gap_limit",
            Status::TimeLimit => "time_limit",
            Status::FirstSolution => "first_solution",
            Status::Aborted => "aborted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoreState {
    #[serde(rename = "busy")]
    Busy,
    #[serde(rename = "idle")]
    Idle,
    #[serde(rename = "comm")]
    Communicating,
}

impl CoreState {
    pub fn as_str(self) -> &'static str {
        match self {
            CoreState::Busy => "busy",
            CoreState::Idle => "idle",
            CoreState::Communicating => "comm",
        }
    }
}

/// Primal and dual bound after an update at time `t`.
///
/// Objective values are extended reals: `f64::INFINITY` and
/// `f64::NEG_INFINITY` stand for "no bound yet".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEvent {
    pub t: f64,
    pub primal: f64,
    pub dual: f64,
}

impl BoundEvent {
    pub fn new(t: f64, primal: f64, dual: f64) -> Self {
        Self { t, primal, dual }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreInterval {
    pub core_id: u32,
    pub start: f64,
    pub end: f64,
    pub kind: CoreState,
}

impl CoreInterval {
    pub fn new(core_id: u32, start: f64, end: f64, kind: CoreState) -> Self {
        Self {
            core_id,
            start,
            end,
            kind,
        }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WorkCounters {
    pub nodes_processed: u64,
    pub bounding_problems: u64,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance_id: String,
    pub solver_id: String,
    pub cores: u32,
    pub seed: u64,
    pub time_limit: f64,
    pub status: Status,
    pub wall_time: f64,
    pub sense: Sense,
}

impl RunRecord {
    /// Wall-clock time multiplied by the number of cores, in core-seconds.
    pub fn core_hours(&self) -> f64 {
        core_hours(self.wall_time, self.cores)
    }
}

/// Core-seconds consumed by `cores` cores held for `wall_time` seconds.
pub fn core_hours(wall_time: f64, cores: u32) -> f64 {
    wall_time * f64::from(cores)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub run: RunRecord,
    pub bounds: Vec<BoundEvent>,
    pub work: Option<WorkCounters>,
    pub core_activity: Vec<CoreInterval>,
}

impl Trace {
    pub fn new(run: RunRecord) -> Self {
        Self {
            run,
            bounds: Vec::new(),
            work: None,
            core_activity: Vec::new(),
        }
    }

    /// Bounds in force before any event: no solution and no proof.
    pub fn initial_bounds(&self) -> (f64, f64) {
        match self.run.sense {
            Sense::Min => (f64::INFINITY, f64::NEG_INFINITY),
            Sense::Max => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Evaluates the bound step functions at `t`.
    ///
    /// The functions are right-continuous: an event at time `t` is already
    /// in force at `t`.
    pub fn bounds_at(&self, t: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.run.wall_time).contains(&t) {
            return Err(Error::OutOfDomain {
                t,
                wall_time: self.run.wall_time,
            });
        }
        // Events are sorted by strictly increasing time.
        let idx = self.bounds.partition_point(|e| e.t <= t);
        Ok(match idx {
            0 => self.initial_bounds(),
            i => (self.bounds[i - 1].primal, self.bounds[i - 1].dual),
        })
    }

    /// Returns the trace in minimization sense, negating objective values of
    /// maximization traces. Minimization traces are returned unchanged.
    pub fn normalize_sense(&self) -> Trace {
        let mut out = self.clone();
        if self.run.sense == Sense::Max {
            out.run.sense = Sense::Min;
            for e in &mut out.bounds {
                e.primal = -e.primal;
                e.dual = -e.dual;
            }
        }
        out
    }

    pub fn core_hours(&self) -> f64 {
        self.run.core_hours()
    }

    /// Last recorded bounds, or the initial bounds if there are no events.
    pub fn final_bounds(&self) -> (f64, f64) {
        self.bounds
            .last()
            .map(|e| (e.primal, e.dual))
            .unwrap_or_else(|| self.initial_bounds())
    }
}
