//! Time-to-criterion measures and the gap function with its integral.

use super::gap::{is_within_tolerance, relative_gap_with, GapDenominator, Tolerances};
use super::{MeasureValue, Unit};
use crate::error::{Error, Result};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapFunctionSample {
    pub t: f64,
    pub gap: f64,
}

/// Bound states of the step function, starting at `t = 0`: an implicit
/// initial state is prepended when the first event comes later.
fn states(trace: &Trace) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    let (p0, d0) = trace.initial_bounds();
    let implicit = match trace.bounds.first() {
        Some(e) if e.t <= 0.0 => None,
        _ => Some((0.0, p0, d0)),
    };
    implicit
        .into_iter()
        .chain(trace.bounds.iter().map(|e| (e.t, e.primal, e.dual)))
}

/// The gap as a step function of time: one sample per bound event, plus
/// `(0, 1)` when nothing is known at `t = 0`.
pub fn gap_function(trace: &Trace) -> Vec<GapFunctionSample> {
    gap_function_with(trace, GapDenominator::Max)
}

pub fn gap_function_with(trace: &Trace, denom: GapDenominator) -> Vec<GapFunctionSample> {
    states(trace)
        .map(|(t, p, d)| GapFunctionSample {
            t,
            gap: relative_gap_with(p, d, denom),
        })
        .collect()
}

fn first_time(trace: &Trace, name: &str, pred: impl Fn(f64, f64) -> bool) -> MeasureValue {
    match states(trace).find(|&(_, p, d)| pred(p, d)) {
        Some((t, _, _)) => MeasureValue::new(name, t, Unit::Seconds),
        None => MeasureValue::censored(name, trace.run.time_limit, Unit::Seconds),
    }
}

/// Earliest time at which the relative gap is within `tol.rel` or the
/// absolute bound difference within `tol.abs`. Censored at the time limit.
pub fn time_to_optimality(trace: &Trace, tol: &Tolerances) -> MeasureValue {
    first_time(trace, "time_to_optimality", |p, d| {
        is_within_tolerance(p, d, tol)
    })
}

/// Earliest time at which the relative gap is at most `target`.
pub fn time_to_gap(trace: &Trace, target: f64) -> Result<MeasureValue> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidArgument(format!(
            "gap target {target} outside [0, 1]"
        )));
    }
    Ok(first_time(trace, "time_to_gap", |p, d| {
        relative_gap_with(p, d, GapDenominator::Max) <= target
    }))
}

/// Earliest time at which the absolute bound difference is at most `target`.
pub fn time_to_abs_gap(trace: &Trace, target: f64) -> Result<MeasureValue> {
    if !(target >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "absolute gap target {target} must be non-negative"
        )));
    }
    Ok(first_time(trace, "time_to_abs_gap", |p, d| {
        p.is_finite() && d.is_finite() && (p - d).abs() <= target
    }))
}

pub fn time_to_first_solution(trace: &Trace) -> MeasureValue {
    first_time(trace, "time_to_first_solution", |p, _| p.is_finite())
}

/// Relative gap at the end of the run.
pub fn final_gap(trace: &Trace) -> f64 {
    let (p, d) = trace.final_bounds();
    relative_gap_with(p, d, GapDenominator::Max)
}

/// Integral of the gap step function over `[0, h]`, where
/// `h = min(horizon, wall_time)`. The gap is 1 before the first event.
/// The result lies in `[0, h]`.
pub fn primal_dual_integral(trace: &Trace, horizon: f64) -> f64 {
    primal_dual_integral_with(trace, horizon, GapDenominator::Max)
}

pub fn primal_dual_integral_with(trace: &Trace, horizon: f64, denom: GapDenominator) -> f64 {
    let h = horizon.min(trace.run.wall_time).max(0.0);
    let mut acc = 0.0;
    let mut last_t = 0.0;
    let mut last_gap = 1.0;
    for s in gap_function_with(trace, denom) {
        if s.t >= h {
            break;
        }
        acc += last_gap * (s.t - last_t);
        last_t = s.t;
        last_gap = s.gap;
    }
    acc + last_gap * (h - last_t)
}
