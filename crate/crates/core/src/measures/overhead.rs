//! Work counts and directly measurable parallel overhead.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::trace::{from_micros, to_micros, validate, CoreState, Trace, WorkCounters};

/// Work totals of a run; `None` when the trace carries no work record.
pub fn work_counts(trace: &Trace) -> Option<WorkCounters> {
    trace.work
}

/// Nodes processed per second of wall time.
pub fn node_throughput(trace: &Trace) -> Result<f64> {
    let work = trace
        .work
        .ok_or_else(|| Error::InvalidArgument("trace has no work counters".into()))?;
    if !(trace.run.wall_time > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "node throughput needs positive wall time, got {}",
            trace.run.wall_time
        )));
    }
    Ok(work.nodes_processed as f64 / trace.run.wall_time)
}

/// Ratios `other / base` of nodes, bounding problems and iterations.
/// Values above 1 mean `other` performed more work.
pub fn work_change(base: &WorkCounters, other: &WorkCounters) -> (f64, f64, f64) {
    let ratio = |a: u64, b: u64| b as f64 / a as f64;
    (
        ratio(base.nodes_processed, other.nodes_processed),
        ratio(base.bounding_problems, other.bounding_problems),
        ratio(base.iterations, other.iterations),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RampDefinition {
    /// Sum over cores of the time before each core first works (ramp-up)
    /// and after it last works (ramp-down).
    PerCoreSum,
    /// Time until every core has started working, and from the earliest
    /// final stop to the end of the run.
    AllCoresActive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampTimes {
    pub ramp_up: f64,
    pub ramp_down: f64,
}

pub fn ramp_times(trace: &Trace, definition: RampDefinition) -> Result<RampTimes> {
    if trace.core_activity.is_empty() {
        return Err(Error::MalformedActivity("no core activity recorded".into()));
    }
    let wall = to_micros(trace.run.wall_time);
    let mut spans: BTreeMap<u32, (i64, i64)> = BTreeMap::new();
    for c in trace
        .core_activity
        .iter()
        .filter(|c| c.kind == CoreState::Busy)
    {
        let (s, e) = (to_micros(c.start), to_micros(c.end));
        let span = spans.entry(c.core_id).or_insert((s, e));
        span.0 = span.0.min(s);
        span.1 = span.1.max(e);
    }
    let mut ids: Vec<u32> = trace.core_activity.iter().map(|c| c.core_id).collect();
    ids.sort_unstable();
    ids.dedup();
    if let Some(id) = ids.iter().find(|id| !spans.contains_key(id)) {
        return Err(Error::MalformedActivity(format!(
            "core {id} has no busy interval"
        )));
    }
    let (up, down) = match definition {
        RampDefinition::PerCoreSum => spans
            .values()
            .fold((0i64, 0i64), |(u, d), &(s, e)| (u + s, d + (wall - e))),
        RampDefinition::AllCoresActive => {
            let up = spans.values().map(|s| s.0).max().unwrap_or(0);
            let last = spans.values().map(|s| s.1).min().unwrap_or(wall);
            (up, wall - last)
        }
    };
    Ok(RampTimes {
        ramp_up: from_micros(up),
        ramp_down: from_micros(down),
    })
}

/// Core time split by activity, held in whole microseconds so that the
/// three parts sum exactly to `cores x wall_time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OverheadBreakdown {
    pub busy_us: i64,
    pub idle_us: i64,
    pub comm_us: i64,
}

impl OverheadBreakdown {
    pub fn busy(&self) -> f64 {
        from_micros(self.busy_us)
    }

    pub fn idle(&self) -> f64 {
        from_micros(self.idle_us)
    }

    pub fn comm(&self) -> f64 {
        from_micros(self.comm_us)
    }

    pub fn total_us(&self) -> i64 {
        self.busy_us + self.idle_us + self.comm_us
    }
}

/// Sums interval lengths per activity kind. Fails unless every core's
/// intervals cover `[0, wall_time]` exactly.
pub fn overhead_breakdown(trace: &Trace) -> Result<OverheadBreakdown> {
    if trace.core_activity.is_empty() {
        return Err(Error::MalformedActivity("no core activity recorded".into()));
    }
    let problems = validate::check_activity(trace);
    if let Some(v) = problems.first() {
        return Err(Error::MalformedActivity(v.message.clone()));
    }
    let mut out = OverheadBreakdown::default();
    for c in &trace.core_activity {
        let len = to_micros(c.end) - to_micros(c.start);
        match c.kind {
            CoreState::Busy => out.busy_us += len,
            CoreState::Idle => out.idle_us += len,
            CoreState::Communicating => out.comm_us += len,
        }
    }
    Ok(out)
}
