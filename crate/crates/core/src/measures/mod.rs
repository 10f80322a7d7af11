//! Per-run measures of efficiency, work, progress and parallel overhead.

mod gap;
mod overhead;
mod progress;
mod scaling;

pub use gap::{is_within_tolerance, relative_gap, relative_gap_with, GapDenominator, Tolerances};
pub use overhead::{
    node_throughput, overhead_breakdown, ramp_times, work_change, work_counts,
    OverheadBreakdown, RampDefinition, RampTimes,
};
pub use progress::{
    final_gap, gap_function, gap_function_with, primal_dual_integral, primal_dual_integral_with,
    time_to_abs_gap, time_to_first_solution, time_to_gap, time_to_optimality, GapFunctionSample,
};
pub use scaling::{parallel_efficiency, speedup, speedup_of};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::trace::{Status, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Seconds,
    Ratio,
    Count,
    NodesPerSecond,
    CoreSeconds,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Seconds => "seconds",
            Unit::Ratio => "ratio",
            Unit::Count => "count",
            Unit::NodesPerSecond => "nodes/second",
            Unit::CoreSeconds => "core-seconds",
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "seconds" => Unit::Seconds,
            "ratio" => Unit::Ratio,
            "count" => Unit::Count,
            "nodes/second" => Unit::NodesPerSecond,
            "core-seconds" => Unit::CoreSeconds,
            other => return Err(Error::InvalidArgument(format!("unknown unit `{other}`"))),
        })
    }
}

/// A named scalar measure. Censored values mark runs that did not reach the
/// measure's criterion; for time measures they carry the time limit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub name: String,
    pub value: f64,
    pub unit: Unit,
    pub censored: bool,
}

impl MeasureValue {
    pub fn new(name: impl Into<String>, value: f64, unit: Unit) -> Self {
        Self {
            name: name.into(),
            value,
            unit,
            censored: false,
        }
    }

    pub fn censored(name: impl Into<String>, value: f64, unit: Unit) -> Self {
        Self {
            censored: true,
            ..Self::new(name, value, unit)
        }
    }
}

/// Measures that can be extracted from a single trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    WallTime,
    CoreHours,
    TimeToOptimality,
    TimeToGap,
    TimeToFirstSolution,
    Pdi,
    FinalGap,
    Nodes,
    BoundingProblems,
    Iterations,
    NodeThroughput,
    RampUp,
    RampDown,
    RampUpAllActive,
    RampDownAllActive,
    BusyTime,
    IdleTime,
    CommTime,
}

impl Measure {
    pub const ALL: [Measure; 18] = [
        Measure::WallTime,
        Measure::CoreHours,
        Measure::TimeToOptimality,
        Measure::TimeToGap,
        Measure::TimeToFirstSolution,
        Measure::Pdi,
        Measure::FinalGap,
        Measure::Nodes,
        Measure::BoundingProblems,
        Measure::Iterations,
        Measure::NodeThroughput,
        Measure::RampUp,
        Measure::RampDown,
        Measure::RampUpAllActive,
        Measure::RampDownAllActive,
        Measure::BusyTime,
        Measure::IdleTime,
        Measure::CommTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::WallTime => "wall_time",
            Measure::CoreHours => "core_hours",
            Measure::TimeToOptimality => "time_to_optimality",
            Measure::TimeToGap => "time_to_gap",
            Measure::TimeToFirstSolution => "time_to_first_solution",
            Measure::Pdi => "pdi",
            Measure::FinalGap => "final_gap",
            Measure::Nodes => "nodes",
            Measure::BoundingProblems => "bounding_problems",
            Measure::Iterations => "iterations",
            Measure::NodeThroughput => "node_throughput",
            Measure::RampUp => "ramp_up",
            Measure::RampDown => "ramp_down",
            Measure::RampUpAllActive => "ramp_up_all_active",
            Measure::RampDownAllActive => "ramp_down_all_active",
            Measure::BusyTime => "busy_time",
            Measure::IdleTime => "idle_time",
            Measure::CommTime => "comm_time",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Measure::CoreHours | Measure::BusyTime | Measure::IdleTime | Measure::CommTime => {
                Unit::CoreSeconds
            }
            Measure::FinalGap => Unit::Ratio,
            Measure::Nodes | Measure::BoundingProblems | Measure::Iterations => Unit::Count,
            Measure::NodeThroughput => Unit::NodesPerSecond,
            _ => Unit::Seconds,
        }
    }

    /// Computes the measure, or `Ok(None)` when the trace lacks the data it
    /// needs (no work record, no core activity).
    pub fn evaluate(self, trace: &Trace, opts: &MeasureOptions) -> Result<Option<MeasureValue>> {
        let name = self.name();
        let unit = self.unit();
        let plain = |v: f64| Ok(Some(MeasureValue::new(name, v, unit)));
        let hit_limit = trace.run.status == Status::TimeLimit;
        match self {
            Measure::WallTime => {
                let mut m = MeasureValue::new(name, trace.run.wall_time, unit);
                if hit_limit {
                    m = MeasureValue::censored(name, trace.run.time_limit, unit);
                }
                Ok(Some(m))
            }
            Measure::CoreHours => plain(trace.core_hours()),
            Measure::TimeToOptimality => Ok(Some(time_to_optimality(trace, &opts.tolerances))),
            Measure::TimeToGap => time_to_gap(trace, opts.gap_target).map(Some),
            Measure::TimeToFirstSolution => Ok(Some(time_to_first_solution(trace))),
            Measure::Pdi => {
                let horizon = opts.pdi_horizon.unwrap_or(trace.run.time_limit);
                plain(primal_dual_integral_with(trace, horizon, opts.denominator))
            }
            Measure::FinalGap => {
                let (p, d) = trace.final_bounds();
                plain(relative_gap_with(p, d, opts.denominator))
            }
            Measure::Nodes | Measure::BoundingProblems | Measure::Iterations => {
                let Some(w) = trace.work else { return Ok(None) };
                let v = match self {
                    Measure::Nodes => w.nodes_processed,
                    Measure::BoundingProblems => w.bounding_problems,
                    _ => w.iterations,
                };
                plain(v as f64)
            }
            Measure::NodeThroughput => {
                if trace.work.is_none() || trace.run.wall_time <= 0.0 {
                    return Ok(None);
                }
                plain(node_throughput(trace)?)
            }
            Measure::RampUp | Measure::RampDown | Measure::RampUpAllActive
            | Measure::RampDownAllActive => {
                if trace.core_activity.is_empty() {
                    return Ok(None);
                }
                let def = match self {
                    Measure::RampUp | Measure::RampDown => RampDefinition::PerCoreSum,
                    _ => RampDefinition::AllCoresActive,
                };
                let r = ramp_times(trace, def)?;
                plain(match self {
                    Measure::RampUp | Measure::RampUpAllActive => r.ramp_up,
                    _ => r.ramp_down,
                })
            }
            Measure::BusyTime | Measure::IdleTime | Measure::CommTime => {
                if trace.core_activity.is_empty() {
                    return Ok(None);
                }
                let b = overhead_breakdown(trace)?;
                plain(match self {
                    Measure::BusyTime => b.busy(),
                    Measure::IdleTime => b.idle(),
                    _ => b.comm(),
                })
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    pub tolerances: Tolerances,
    /// Relative gap target for [`Measure::TimeToGap`].
    pub gap_target: f64,
    /// Integration horizon for the PDI; defaults to the run's time limit.
    pub pdi_horizon: Option<f64>,
    pub denominator: GapDenominator,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            gap_target: 0.01,
            pdi_horizon: None,
            denominator: GapDenominator::Max,
        }
    }
}
