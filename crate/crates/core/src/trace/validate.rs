use std::collections::BTreeMap;
use std::fmt;

use super::{to_micros, Sense, Status, Trace};
use crate::measures::{is_within_tolerance, Tolerances};

/// Slack allowed between wall time and time limit for non-aborted runs.
const LIMIT_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Negative, non-finite, or beyond-wall-time timestamps.
    TimeDomain,
    /// Bound events not in strictly increasing time order.
    EventOrder,
    /// Primal or dual bound moving in the wrong direction.
    Monotonicity,
    /// Dual bound strictly better than the primal bound.
    CrossedBounds,
    /// NaN objective value.
    InvalidValue,
    /// Core interval with start after end, or an unknown core id.
    IntervalShape,
    /// Overlapping intervals on one core.
    Overlap,
    /// A core's intervals do not cover `[0, wall_time]` exactly.
    Coverage,
    /// Fewer iterations than bounding problems.
    WorkCounters,
    /// Inconsistent run header.
    RunRecord,
    /// Optimal status with a final gap above tolerance.
    FinalGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

/// Checks every trace invariant and returns the violations found; an empty
/// list means the trace is well formed.
pub fn validate_trace(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, message: String| out.push(Violation { kind, message });
    let run = &trace.run;

    if run.cores == 0 {
        push(ViolationKind::RunRecord, "cores must be at least 1".into());
    }
    if !(run.wall_time >= 0.0) || !run.wall_time.is_finite() {
        push(
            ViolationKind::RunRecord,
            format!("invalid wall time {}", run.wall_time),
        );
    }
    if run.status != Status::Aborted && run.wall_time > run.time_limit + LIMIT_SLACK {
        push(
            ViolationKind::RunRecord,
            format!(
                "wall time {} exceeds time limit {}",
                run.wall_time, run.time_limit
            ),
        );
    }

    // Bound events.
    let better_or_equal = |new: f64, old: f64, primal: bool| -> bool {
        // For minimization the primal may only fall and the dual only rise.
        match (run.sense, primal) {
            (Sense::Min, true) | (Sense::Max, false) => new <= old,
            (Sense::Min, false) | (Sense::Max, true) => new >= old,
        }
    };
    let mut prev: Option<&super::BoundEvent> = None;
    for (i, e) in trace.bounds.iter().enumerate() {
        if !e.t.is_finite() || e.t < 0.0 {
            push(
                ViolationKind::TimeDomain,
                format!("event {i} at invalid time {}", e.t),
            );
        } else if e.t > run.wall_time {
            push(
                ViolationKind::TimeDomain,
                format!("event {i} at {} after wall time {}", e.t, run.wall_time),
            );
        }
        if e.primal.is_nan() || e.dual.is_nan() {
            push(ViolationKind::InvalidValue, format!("event {i} has NaN bound"));
            prev = Some(e);
            continue;
        }
        if e.primal.is_finite() && e.dual.is_finite() {
            let slack = 1e-9 * e.primal.abs().max(e.dual.abs()).max(1.0);
            let crossed = match run.sense {
                Sense::Min => e.dual > e.primal + slack,
                Sense::Max => e.dual < e.primal - slack,
            };
            if crossed {
                push(
                    ViolationKind::CrossedBounds,
                    format!("event {i}: dual {} beyond primal {}", e.dual, e.primal),
                );
            }
        }
        if let Some(p) = prev {
            if !(e.t > p.t) {
                push(
                    ViolationKind::EventOrder,
                    format!("event {i} at {} not after {}", e.t, p.t),
                );
            }
            if !p.primal.is_nan() && !better_or_equal(e.primal, p.primal, true) {
                push(
                    ViolationKind::Monotonicity,
                    format!("primal moves from {} to {} at event {i}", p.primal, e.primal),
                );
            }
            if !p.dual.is_nan() && !better_or_equal(e.dual, p.dual, false) {
                push(
                    ViolationKind::Monotonicity,
                    format!("dual moves from {} to {} at event {i}", p.dual, e.dual),
                );
            }
        }
        prev = Some(e);
    }

    if run.status == Status::Optimal {
        let (p, d) = trace.final_bounds();
        if !is_within_tolerance(p, d, &Tolerances::default()) {
            push(
                ViolationKind::FinalGap,
                format!("status optimal but final bounds are ({p}, {d})"),
            );
        }
    }

    if let Some(w) = &trace.work {
        if w.iterations < w.bounding_problems {
            push(
                ViolationKind::WorkCounters,
                format!(
                    "{} iterations for {} bounding problems",
                    w.iterations, w.bounding_problems
                ),
            );
        }
    }

    if !trace.core_activity.is_empty() {
        out.extend(check_activity(trace));
    }
    out
}

/// Core interval shape, overlap and coverage checks.
pub(crate) fn check_activity(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, message: String| out.push(Violation { kind, message });
    let wall = to_micros(trace.run.wall_time);
    let mut per_core: BTreeMap<u32, Vec<(i64, i64)>> = BTreeMap::new();
    for c in &trace.core_activity {
        if c.core_id >= trace.run.cores {
            push(
                ViolationKind::IntervalShape,
                format!("core id {} but run has {} cores", c.core_id, trace.run.cores),
            );
            continue;
        }
        if !(c.start <= c.end) {
            push(
                ViolationKind::IntervalShape,
                format!("core {} interval [{}, {}] reversed", c.core_id, c.start, c.end),
            );
            continue;
        }
        per_core
            .entry(c.core_id)
            .or_default()
            .push((to_micros(c.start), to_micros(c.end)));
    }
    for id in 0..trace.run.cores {
        let Some(ivs) = per_core.get_mut(&id) else {
            push(ViolationKind::Coverage, format!("core {id} has no intervals"));
            continue;
        };
        ivs.sort_unstable();
        let mut cursor = 0i64;
        for &(s, e) in ivs.iter() {
            if s < cursor {
                push(
                    ViolationKind::Overlap,
                    format!("core {id} intervals overlap at {}", super::from_micros(s)),
                );
            } else if s > cursor {
                push(
                    ViolationKind::Coverage,
                    format!(
                        "core {id} uncovered on [{}, {}]",
                        super::from_micros(cursor),
                        super::from_micros(s)
                    ),
                );
            }
            cursor = cursor.max(e);
        }
        if cursor != wall {
            push(
                ViolationKind::Coverage,
                format!(
                    "core {id} covered until {} but wall time is {}",
                    super::from_micros(cursor),
                    trace.run.wall_time
                ),
            );
        }
    }
    out
}
