//! Performance profiles, cumulative profiles and speed-up curves.
//!
//! Every profile is an empirical CDF stored as a right-continuous step
//! function: `points` lists the jump locations with the fraction reached
//! at each one.

mod svg;

pub use svg::{render_svg, Plot, SvgOptions};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A measured value for one (instance, solver) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub value: f64,
    pub censored: bool,
}

impl Observation {
    pub fn solved(value: f64) -> Self {
        Self {
            value,
            censored: false,
        }
    }

    pub fn censored(value: f64) -> Self {
        Self {
            value,
            censored: true,
        }
    }
}

/// Instance x solver matrix of one measure. Rows and columns are kept in
/// sorted order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasureTable {
    cells: BTreeMap<String, BTreeMap<String, Observation>>,
    solvers: Vec<String>,
}

impl MeasureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, instance: &str, solver: &str, obs: Observation) {
        self.cells
            .entry(instance.to_string())
            .or_default()
            .insert(solver.to_string(), obs);
        if let Err(pos) = self.solvers.binary_search_by(|s| s.as_str().cmp(solver)) {
            self.solvers.insert(pos, solver.to_string());
        }
    }

    pub fn solvers(&self) -> &[String] {
        &self.solvers
    }

    pub fn instances(&self) -> impl Iterator<Item = &str> {
        self.cells.keys().map(String::as_str)
    }

    pub fn get(&self, instance: &str, solver: &str) -> Option<Observation> {
        self.cells.get(instance)?.get(solver).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RatioOptions {
    /// Keep instances some solver failed on; its ratio becomes `+inf`.
    pub include_timeouts: bool,
    /// Added to numerator and denominator of every ratio.
    pub ratio_shift: f64,
}

/// Performance ratios `r[p][s] = t[p][s] / min_s t[p][s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioMatrix {
    pub solvers: Vec<String>,
    pub instances: Vec<String>,
    /// Indexed `[instance][solver]`; censored cells are `+inf`.
    pub ratios: Vec<Vec<f64>>,
    /// Instances on which every solver was censored.
    pub dropped_all_censored: usize,
    /// Instances dropped because some solver timed out (only when
    /// timeouts are excluded).
    pub dropped_timeouts: usize,
}

/// Computes performance ratios against the per-instance virtual best.
///
/// Missing cells count as censored. Instances with no uncensored value are
/// always dropped and counted; with `include_timeouts == false`, any
/// instance with a censored cell is dropped as well.
pub fn performance_ratios(table: &MeasureTable, opts: &RatioOptions) -> Result<RatioMatrix> {
    if table.solvers.is_empty() {
        return Err(Error::Empty("performance ratios need at least one solver"));
    }
    if !(opts.ratio_shift >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ratio shift {} must be >= 0",
            opts.ratio_shift
        )));
    }
    let mut out = RatioMatrix {
        solvers: table.solvers.clone(),
        instances: Vec::new(),
        ratios: Vec::new(),
        dropped_all_censored: 0,
        dropped_timeouts: 0,
    };
    for (instance, row) in &table.cells {
        let cells: Vec<Option<f64>> = table
            .solvers
            .iter()
            .map(|s| row.get(s).filter(|o| !o.censored).map(|o| o.value))
            .collect();
        let Some(best) = cells.iter().flatten().copied().reduce(f64::min) else {
            out.dropped_all_censored += 1;
            continue;
        };
        if !opts.include_timeouts && cells.iter().any(Option::is_none) {
            out.dropped_timeouts += 1;
            continue;
        }
        let denom = best + opts.ratio_shift;
        let ratios = cells
            .iter()
            .map(|c| match *c {
                None => f64::INFINITY,
                // A zero virtual best without a shift: ties are best, the
                // rest are unboundedly worse.
                Some(v) if denom <= 0.0 => {
                    if v <= best {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                }
                Some(v) => (v + opts.ratio_shift) / denom,
            })
            .collect();
        out.instances.push(instance.clone());
        out.ratios.push(ratios);
    }
    Ok(out)
}

/// An empirical CDF as a step function.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub label: String,
    /// Jump points `(x, fraction)`, strictly increasing in `x`,
    /// non-decreasing in fraction.
    pub points: Vec<(f64, f64)>,
    /// Last jump location when the curve ends below 1.
    pub right_censored_at: Option<f64>,
}

impl ProfileCurve {
    /// Fraction at `x` (right-continuous; 0 before the first jump, or the
    /// starting level of an offset curve).
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|p| p.0 <= x);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }

    /// Final fraction reached by the curve.
    pub fn max_fraction(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.1)
    }
}

/// Builds a step curve from finite values with denominator `total`; the
/// curve starts at level `offset`.
fn ecdf(label: &str, values: impl IntoIterator<Item = f64>, total: usize, offset: f64) -> ProfileCurve {
    let mut xs: Vec<f64> = values.into_iter().filter(|v| v.is_finite()).collect();
    xs.sort_by(f64::total_cmp);
    let mut points: Vec<(f64, f64)> = Vec::new();
    if total > 0 {
        for (i, &x) in xs.iter().enumerate() {
            let frac = offset + (i + 1) as f64 / total as f64;
            match points.last_mut() {
                Some(last) if last.0 == x => last.1 = frac,
                _ => points.push((x, frac)),
            }
        }
    }
    let right_censored_at = match points.last() {
        Some(&(x, f)) if f < 1.0 - 1e-12 => Some(x),
        _ => None,
    };
    ProfileCurve {
        label: label.to_string(),
        points,
        right_censored_at,
    }
}

/// The performance profile `rho_s(tau)` of `solver`.
pub fn performance_profile(ratios: &RatioMatrix, solver: &str) -> Result<ProfileCurve> {
    let col = ratios
        .solvers
        .iter()
        .position(|s| s == solver)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown solver `{solver}`")))?;
    Ok(ecdf(
        solver,
        ratios.ratios.iter().map(|row| row[col]),
        ratios.instances.len(),
        0.0,
    ))
}

/// Fraction of instances whose (uncensored) measure is at most `x`.
pub fn cumulative_profile(label: &str, observations: &[Observation]) -> ProfileCurve {
    ecdf(
        label,
        observations.iter().filter(|o| !o.censored).map(|o| o.value),
        observations.len(),
        0.0,
    )
}

/// Time curve over solved instances followed by a final-gap curve over
/// unsolved ones, sharing one denominator. The gap curve starts at the
/// level where the time curve ends, so the two read as one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedProfile {
    pub time: ProfileCurve,
    pub gap: ProfileCurve,
}

/// `runs` pairs each run's time measure with its final relative gap.
pub fn combined_time_gap_profile(label: &str, runs: &[(Observation, f64)]) -> CombinedProfile {
    let total = runs.len();
    let time = ecdf(
        label,
        runs.iter().filter(|r| !r.0.censored).map(|r| r.0.value),
        total,
        0.0,
    );
    let solved = runs.iter().filter(|r| !r.0.censored).count();
    let offset = if total == 0 {
        0.0
    } else {
        solved as f64 / total as f64
    };
    let gap = ecdf(
        label,
        runs.iter().filter(|r| r.0.censored).map(|r| r.1),
        total,
        offset,
    );
    CombinedProfile { time, gap }
}

/// Speed-up relative to a baseline core count, with the linear reference.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupCurve {
    pub label: String,
    pub baseline_cores: u32,
    /// `(cores, speed-up)` for every core count except the baseline.
    pub points: Vec<(u32, f64)>,
    /// `(cores, cores / baseline)`.
    pub ideal: Vec<(u32, f64)>,
}

/// Speed-up of an aggregated measure (e.g. a shifted geometric mean of
/// wall time or PDI per core count) relative to `baseline` cores.
pub fn speedup_curve(label: &str, aggregated: &[(u32, f64)], baseline: u32) -> Result<SpeedupCurve> {
    let base = aggregated
        .iter()
        .find(|(n, _)| *n == baseline)
        .map(|&(_, v)| v)
        .ok_or_else(|| {
            Error::MissingBaseline(format!("{label}: no value at {baseline} cores"))
        })?;
    let mut rows: Vec<(u32, f64)> = aggregated
        .iter()
        .filter(|(n, _)| *n != baseline)
        .copied()
        .collect();
    rows.sort_by_key(|r| r.0);
    let mut points = Vec::with_capacity(rows.len());
    let mut ideal = Vec::with_capacity(rows.len());
    for (n, v) in rows {
        points.push((n, crate::measures::speedup(base, v)?));
        ideal.push((n, f64::from(n) / f64::from(baseline)));
    }
    Ok(SpeedupCurve {
        label: label.to_string(),
        baseline_cores: baseline,
        points,
        ideal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(&str, &str, Observation)]) -> MeasureTable {
        let mut t = MeasureTable::new();
        for &(i, s, o) in rows {
            t.insert(i, s, o);
        }
        t
    }

    use Observation as O;

    #[test]
    fn ratio_examples() {
        let t = table(&[("p", "a", O::solved(2.0)), ("p", "b", O::solved(4.0))]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        assert_eq!(r.ratios, vec![vec![1.0, 2.0]]);

        let t = table(&[("p", "a", O::censored(60.0)), ("p", "b", O::solved(4.0))]);
        let opts = RatioOptions {
            include_timeouts: true,
            ratio_shift: 0.0,
        };
        let r = performance_ratios(&t, &opts).unwrap();
        assert_eq!(r.ratios, vec![vec![f64::INFINITY, 1.0]]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        assert!(r.instances.is_empty());
        assert_eq!(r.dropped_timeouts, 1);

        let t = table(&[("p", "a", O::censored(60.0)), ("p", "b", O::censored(60.0))]);
        let r = performance_ratios(&t, &opts).unwrap();
        assert!(r.instances.is_empty());
        assert_eq!(r.dropped_all_censored, 1);

        assert!(performance_ratios(&MeasureTable::new(), &opts).is_err());
    }

    #[test]
    fn ratio_shift_damps_small_times() {
        let t = table(&[("p", "a", O::solved(0.05)), ("p", "b", O::solved(0.2))]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        assert!((r.ratios[0][1] - 4.0).abs() < 1e-12);
        let shifted = RatioOptions {
            include_timeouts: false,
            ratio_shift: 1.0,
        };
        let r = performance_ratios(&t, &shifted).unwrap();
        assert!((r.ratios[0][1] - 1.2 / 1.05).abs() < 1e-12);
    }

    #[test]
    fn zero_best_without_shift() {
        let t = table(&[("p", "a", O::solved(0.0)), ("p", "b", O::solved(1.0))]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        assert_eq!(r.ratios, vec![vec![1.0, f64::INFINITY]]);
    }

    #[test]
    fn profile_examples() {
        let t = table(&[
            ("p1", "s", O::solved(1.0)),
            ("p1", "z", O::solved(3.0)),
            ("p2", "s", O::solved(2.0)),
            ("p2", "z", O::solved(5.0)),
        ]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        assert_eq!(performance_profile(&r, "s").unwrap().eval(1.0), 1.0);

        let t = table(&[
            ("p1", "a", O::solved(2.0)),
            ("p1", "b", O::solved(4.0)),
            ("p2", "a", O::solved(4.0)),
            ("p2", "b", O::solved(2.0)),
        ]);
        let r = performance_ratios(&t, &RatioOptions::default()).unwrap();
        let a = performance_profile(&r, "a").unwrap();
        assert_eq!(a.points, vec![(1.0, 0.5), (2.0, 1.0)]);
        assert_eq!((a.eval(1.0), a.eval(1.99), a.eval(2.0)), (0.5, 0.5, 1.0));
        assert_eq!(a.right_censored_at, None);
        assert!(performance_profile(&r, "c").is_err());
    }

    #[test]
    fn censored_plateau() {
        let mut rows = Vec::new();
        for (i, p) in ["p1", "p2", "p3", "p4"].iter().enumerate() {
            let s = if i == 3 { O::censored(100.0) } else { O::solved(1.0) };
            rows.push((*p, "s", s));
            rows.push((*p, "t", O::solved(2.0)));
        }
        let opts = RatioOptions {
            include_timeouts: true,
            ratio_shift: 0.0,
        };
        let r = performance_ratios(&table(&rows), &opts).unwrap();
        let c = performance_profile(&r, "s").unwrap();
        assert_eq!(c.max_fraction(), 0.75);
        assert_eq!(c.right_censored_at, Some(1.0));
    }

    #[test]
    fn cumulative_examples() {
        let c = cumulative_profile("s", &[O::solved(1.0), O::solved(2.0), O::solved(4.0)]);
        assert!((c.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.eval(0.5), 0.0);

        let c = cumulative_profile(
            "s",
            &[O::solved(1.0), O::solved(2.0), O::solved(3.0), O::censored(10.0)],
        );
        assert_eq!(c.eval(10.0), 0.75);
        assert_eq!(c.max_fraction(), 0.75);
    }

    #[test]
    fn combined_examples() {
        let all = combined_time_gap_profile("s", &[(O::solved(1.0), 0.0), (O::solved(2.0), 0.0)]);
        assert!(all.gap.points.is_empty());
        assert_eq!(all.time.max_fraction(), 1.0);

        let none = combined_time_gap_profile("s", &[(O::censored(9.0), 0.3)]);
        assert!(none.time.points.is_empty());
        assert_eq!(none.gap.points, vec![(0.3, 1.0)]);

        let mixed = combined_time_gap_profile(
            "s",
            &[
                (O::solved(1.0), 0.0),
                (O::solved(3.0), 0.0),
                (O::censored(9.0), 1.0),
                (O::censored(9.0), 0.1),
            ],
        );
        assert_eq!(mixed.time.points, vec![(1.0, 0.25), (3.0, 0.5)]);
        assert_eq!(mixed.gap.points, vec![(0.1, 0.75), (1.0, 1.0)]);
    }

    #[test]
    fn speedup_curve_examples() {
        let data = [
            (1, 132.835),
            (4, 75.133),
            (8, 43.736),
            (16, 22.212),
            (32, 13.339),
        ];
        let c = speedup_curve("alps", &data, 1).unwrap();
        let want = [(4, 1.768), (8, 3.037), (16, 5.98), (32, 9.958)];
        for (got, want) in c.points.iter().zip(want) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-3);
        }
        assert_eq!(c.ideal, vec![(4, 4.0), (8, 8.0), (16, 16.0), (32, 32.0)]);

        let flat = speedup_curve("flat", &[(1, 5.0), (2, 5.0), (4, 5.0)], 1).unwrap();
        assert!(flat.points.iter().all(|p| p.1 == 1.0));

        let halving = speedup_curve("pdi", &[(1, 80.0), (2, 40.0), (4, 20.0)], 1).unwrap();
        assert_eq!(halving.points, halving.ideal);

        assert!(matches!(
            speedup_curve("x", &[(4, 1.0)], 1),
            Err(Error::MissingBaseline(_))
        ));
    }
}
