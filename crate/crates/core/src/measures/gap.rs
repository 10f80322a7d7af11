/// Denominator used when normalizing the primal-dual difference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GapDenominator {
    /// `max(|primal|, |dual|)`; keeps the gap in `[0, 1]`.
    #[default]
    Max,
    /// `min(|primal|, |dual|)`; clamped to 1.
    Min,
    /// A fixed positive scale; clamped to 1.
    Constant(f64),
}

/// Optimality tolerances: a run counts as solved when either the relative
/// gap or the absolute bound difference is within bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-6, abs: 1e-9 }
    }
}

/// Relative primal-dual gap with the `max` denominator.
///
/// Returns 0 when both bounds are zero, `|p - d| / max(|p|, |d|)` when the
/// bounds share a sign, and 1 otherwise. An infinite (or NaN) bound gives 1.
pub fn relative_gap(primal: f64, dual: f64) -> f64 {
    relative_gap_with(primal, dual, GapDenominator::Max)
}

pub fn relative_gap_with(primal: f64, dual: f64, denom: GapDenominator) -> f64 {
    if !primal.is_finite() || !dual.is_finite() {
        return 1.0;
    }
    if primal == 0.0 && dual == 0.0 {
        return 0.0;
    }
    if primal * dual < 0.0 {
        return 1.0;
    }
    let diff = (primal - dual).abs();
    let (a, b) = (primal.abs(), dual.abs());
    match denom {
        GapDenominator::Max => diff / a.max(b),
        GapDenominator::Min => {
            let m = a.min(b);
            if m == 0.0 {
                1.0
            } else {
                (diff / m).min(1.0)
            }
        }
        GapDenominator::Constant(c) => (diff / c).min(1.0),
    }
}

/// True when `(primal, dual)` is within either tolerance.
pub fn is_within_tolerance(primal: f64, dual: f64, tol: &Tolerances) -> bool {
    if primal.is_finite() && dual.is_finite() && (primal - dual).abs() <= tol.abs {
        return true;
    }
    relative_gap(primal, dual) <= tol.rel
}
