use super::MeasureValue;
use crate::error::{Error, Result};

/// Speed-up `base / other` of two positive resource amounts.
pub fn speedup(t_base: f64, t_n: f64) -> Result<f64> {
    if !(t_base > 0.0 && t_base.is_finite() && t_n > 0.0 && t_n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "speed-up needs positive finite times, got ({t_base}, {t_n})"
        )));
    }
    Ok(t_base / t_n)
}

/// Speed-up of two measures; both must be uncensored.
pub fn speedup_of(base: &MeasureValue, other: &MeasureValue) -> Result<f64> {
    for m in [base, other] {
        if m.censored {
            return Err(Error::Censored(m.name.clone()));
        }
    }
    if base.unit != other.unit {
        return Err(Error::MixedMeasures(format!(
            "{} vs {}",
            base.unit.as_str(),
            other.unit.as_str()
        )));
    }
    speedup(base.value, other.value)
}

/// Parallel efficiency `speedup / cores`; one means perfect scaling.
pub fn parallel_efficiency(speedup: f64, cores: u32) -> f64 {
    debug_assert!(cores >= 1);
    speedup / f64::from(cores)
}
