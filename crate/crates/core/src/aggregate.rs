//! Summaries of per-instance measures over a test set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measures::{parallel_efficiency, speedup, MeasureValue};

/// Default shift for time measures, in seconds.
pub const DEFAULT_TIME_SHIFT: f64 = 10.0;
/// Default shift for node counts.
pub const DEFAULT_NODE_SHIFT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    ShiftedGeometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Censoring {
    /// Drop censored values and report how many were dropped.
    ExcludeAndCount,
    /// Keep censored values at their recorded (limit) value.
    CensorAtLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregationPolicy {
    pub kind: MeanKind,
    pub shift: f64,
    pub censoring: Censoring,
}

impl AggregationPolicy {
    pub fn arithmetic(censoring: Censoring) -> Self {
        Self {
            kind: MeanKind::Arithmetic,
            shift: 0.0,
            censoring,
        }
    }

    pub fn shifted_geometric(shift: f64, censoring: Censoring) -> Self {
        Self {
            kind: MeanKind::ShiftedGeometric,
            shift,
            censoring,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    /// `None` when no value survived the censoring policy.
    pub value: Option<f64>,
    pub n_used: usize,
    pub n_censored: usize,
}

pub fn arithmetic_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("arithmetic mean of no values"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    shifted_geometric_mean(values, 0.0)
}

/// `(prod (x_k + s))^(1/n) - s`, evaluated in log space.
///
/// Every `x_k + s` must be positive, so zeros are only accepted with a
/// positive shift.
pub fn shifted_geometric_mean(values: &[f64], shift: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("shifted geometric mean of no values"));
    }
    if !(shift >= 0.0) || !shift.is_finite() {
        return Err(Error::InvalidArgument(format!("shift {shift} must be >= 0")));
    }
    let mut log_sum = 0.0;
    for &x in values {
        let y = x + shift;
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "value {x} with shift {shift} is not positive"
            )));
        }
        log_sum += if shift > 0.0 { (x / shift).ln_1p() } else { y.ln() };
    }
    let mean = log_sum / values.len() as f64;
    // Relative to the shift, so small values keep their precision.
    Ok(if shift > 0.0 { shift * mean.exp_m1() } else { mean.exp() })
}

/// Index of the largest value and its share of the total, a quick check for
/// means dominated by a single instance.
pub fn largest_share(values: &[f64]) -> Option<(usize, f64)> {
    let total: f64 = values.iter().sum();
    let (idx, max) = values
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))?;
    (total > 0.0).then(|| (idx, max / total))
}

/// Summarizes measures of a single name and unit under `policy`.
pub fn aggregate(measures: &[MeasureValue], policy: &AggregationPolicy) -> Result<Summary> {
    if let Some(first) = measures.first() {
        if let Some(m) = measures
            .iter()
            .find(|m| m.unit != first.unit || m.name != first.name)
        {
            return Err(Error::MixedMeasures(format!(
                "{} [{}] vs {} [{}]",
                first.name,
                first.unit.as_str(),
                m.name,
                m.unit.as_str()
            )));
        }
    }
    let n_censored = measures.iter().filter(|m| m.censored).count();
    let used: Vec<f64> = measures
        .iter()
        .filter(|m| policy.censoring == Censoring::CensorAtLimit || !m.censored)
        .map(|m| m.value)
        .collect();
    let value = if used.is_empty() {
        None
    } else {
        Some(match policy.kind {
            MeanKind::Arithmetic => arithmetic_mean(&used)?,
            MeanKind::Geometric => geometric_mean(&used)?,
            MeanKind::ShiftedGeometric => shifted_geometric_mean(&used, policy.shift)?,
        })
    };
    Ok(Summary {
        value,
        n_used: used.len(),
        n_censored,
    })
}

/// One instance's measure at one core count.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingObservation {
    pub instance: String,
    pub cores: u32,
    pub value: MeasureValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalabilityRecord {
    pub instance: String,
    pub cores: u32,
    pub baseline_cores: u32,
    pub speedup: f64,
    /// Speed-up divided by the core-count ratio to the baseline.
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalabilityIssue {
    MissingBaseline { instance: String },
    CensoredBaseline { instance: String },
    Censored { instance: String, cores: u32 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalabilityReport {
    pub records: Vec<ScalabilityRecord>,
    pub issues: Vec<ScalabilityIssue>,
}

/// Speed-up and efficiency per instance and core count, relative to each
/// instance's run at the smallest core count in `observations`.
pub fn per_instance_scalability(observations: &[ScalingObservation]) -> Result<ScalabilityReport> {
    let Some(baseline) = observations.iter().map(|o| o.cores).min() else {
        return Ok(ScalabilityReport::default());
    };
    let mut by_instance: BTreeMap<&str, BTreeMap<u32, &MeasureValue>> = BTreeMap::new();
    for o in observations {
        if o.cores == 0 {
            return Err(Error::InvalidArgument(format!(
                "instance {} has a run with zero cores",
                o.instance
            )));
        }
        let prev = by_instance
            .entry(o.instance.as_str())
            .or_default()
            .insert(o.cores, &o.value);
        if prev.is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate observation for {} at {} cores",
                o.instance, o.cores
            )));
        }
    }

    let mut report = ScalabilityReport::default();
    for (instance, runs) in by_instance {
        let Some(base) = runs.get(&baseline) else {
            report.issues.push(ScalabilityIssue::MissingBaseline {
                instance: instance.to_string(),
            });
            continue;
        };
        if base.censored {
            report.issues.push(ScalabilityIssue::CensoredBaseline {
                instance: instance.to_string(),
            });
            continue;
        }
        for (&cores, m) in &runs {
            if m.censored {
                report.issues.push(ScalabilityIssue::Censored {
                    instance: instance.to_string(),
                    cores,
                });
                continue;
            }
            let s = speedup(base.value, m.value)?;
            let rel_cores = f64::from(cores) / f64::from(baseline);
            report.records.push(ScalabilityRecord {
                instance: instance.to_string(),
                cores,
                baseline_cores: baseline,
                speedup: s,
                efficiency: if baseline == 1 {
                    parallel_efficiency(s, cores)
                } else {
                    s / rel_cores
                },
            });
        }
    }
    Ok(report)
}
