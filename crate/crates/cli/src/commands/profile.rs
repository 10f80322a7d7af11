use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use bnb_assess::aggregate::shifted_geometric_mean;
use bnb_assess::profiles::{
    combined_time_gap_profile, cumulative_profile, performance_profile, performance_ratios,
    render_svg, speedup_curve, MeasureTable, Observation, Plot, ProfileCurve, RatioOptions,
    SpeedupCurve, SvgOptions,
};

use super::{create_dir, write_file, Context};
use crate::cli::{Basis, ProfileArgs, ProfileKind};
use crate::error::{CliError, Result};
use crate::table::{fmt_value, read_measures, MeasureRow};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub curves: usize,
}

fn kind_name(kind: ProfileKind) -> &'static str {
    match kind {
        ProfileKind::Performance => "performance",
        ProfileKind::Cumulative => "cumulative",
        ProfileKind::Combined => "combined",
        ProfileKind::Speedup => "speedup",
    }
}

fn basis_measure(basis: Basis) -> &'static str {
    match basis {
        Basis::Wall => "time_to_optimality",
        Basis::Pdi => "pdi",
    }
}

/// Curve points as CSV: `label,series,x,y`.
struct CurveCsv(String);

impl CurveCsv {
    fn new() -> Self {
        Self("label,series,x,y\n".into())
    }

    fn push(&mut self, label: &str, series: &str, points: impl IntoIterator<Item = (f64, f64)>) {
        let label = if label.contains([',', '"', '\n']) {
            format!("\"{}\"", label.replace('"', "\"\""))
        } else {
            label.to_string()
        };
        for (x, y) in points {
            self.0
                .push_str(&format!("{label},{series},{},{}\n", fmt_value(x), fmt_value(y)));
        }
    }

    fn profile(&mut self, series: &str, c: &ProfileCurve) {
        self.push(&c.label, series, c.points.iter().copied());
    }
}

/// Rows of one measure, keyed per curve. Runs at several core counts are
/// split into one curve per (solver, cores) pair.
fn curve_rows<'a>(rows: &'a [MeasureRow], measure: &str, args: &ProfileArgs) -> Result<BTreeMap<String, Vec<&'a MeasureRow>>> {
    let selected: Vec<&MeasureRow> = rows
        .iter()
        .filter(|r| r.measure == measure && args.cores.is_none_or(|c| r.cores == c))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Data(format!("no `{measure}` rows to profile")));
    }
    let core_counts: BTreeSet<u32> = selected.iter().map(|r| r.cores).collect();
    let split = args.by_cores || core_counts.len() > 1;
    let mut out: BTreeMap<String, Vec<&MeasureRow>> = BTreeMap::new();
    for r in selected {
        let key = if split {
            format!("{}@c{}", r.solver, r.cores)
        } else {
            r.solver.clone()
        };
        out.entry(key).or_default().push(r);
    }
    Ok(out)
}

fn observation(r: &MeasureRow) -> Observation {
    if r.censored {
        Observation::censored(r.value)
    } else {
        Observation::solved(r.value)
    }
}

/// Builds the requested profile from a measures CSV and writes
/// `<prefix>.csv` and `<prefix>.svg`.
pub fn profile(ctx: &Context, args: &ProfileArgs) -> Result<ProfileOutcome> {
    let input = ctx.measures_csv(args.input.as_deref())?;
    let rows = read_measures(&input)?;
    let measure = match args.kind {
        ProfileKind::Speedup => basis_measure(args.basis),
        _ => args.measure.as_str(),
    };
    let prefix = match &args.output_prefix {
        Some(p) => p.clone(),
        None => {
            let tag = match args.kind {
                ProfileKind::Speedup => match args.basis {
                    Basis::Wall => "wall",
                    Basis::Pdi => "pdi",
                },
                _ => measure,
            };
            ctx.out_dir()?
                .join("profiles")
                .join(format!("{}_{tag}", kind_name(args.kind)))
        }
    };

    let mut csv = CurveCsv::new();
    let (svg, curves) = match args.kind {
        ProfileKind::Performance => {
            let mut table = MeasureTable::new();
            for (label, runs) in curve_rows(&rows, measure, args)? {
                for r in runs {
                    table.insert(&r.run_key(), &label, observation(r));
                }
            }
            let opts = RatioOptions {
                include_timeouts: args.include_timeouts,
                ratio_shift: args.ratio_shift,
            };
            let ratios = performance_ratios(&table, &opts)?;
            let curves: Vec<ProfileCurve> = ratios
                .solvers
                .iter()
                .map(|s| performance_profile(&ratios, s))
                .collect::<bnb_assess::Result<_>>()?;
            for c in &curves {
                csv.profile("profile", c);
            }
            println!(
                "{} instances profiled; dropped {} unsolved by every solver, {} with a timeout",
                ratios.instances.len(),
                ratios.dropped_all_censored,
                ratios.dropped_timeouts
            );
            let svg = render_svg(
                &Plot::Profiles(&curves),
                &SvgOptions {
                    title: format!("performance profile: {measure}"),
                    x_label: "ratio to best".into(),
                    log_x: args.log_x,
                    ..Default::default()
                },
            )?;
            (svg, curves.len())
        }
        ProfileKind::Cumulative => {
            let curves: Vec<ProfileCurve> = curve_rows(&rows, measure, args)?
                .into_iter()
                .map(|(label, runs)| {
                    let obs: Vec<Observation> = runs.into_iter().map(observation).collect();
                    cumulative_profile(&label, &obs)
                })
                .collect();
            for c in &curves {
                csv.profile("profile", c);
            }
            let svg = render_svg(
                &Plot::Profiles(&curves),
                &SvgOptions {
                    title: format!("cumulative profile: {measure}"),
                    x_label: measure.to_string(),
                    log_x: args.log_x,
                    ..Default::default()
                },
            )?;
            (svg, curves.len())
        }
        ProfileKind::Combined => {
            let gaps: BTreeMap<(&str, &str, u32, u64), f64> = rows
                .iter()
                .filter(|r| r.measure == "final_gap")
                .map(|r| ((r.instance.as_str(), r.solver.as_str(), r.cores, r.seed), r.value))
                .collect();
            let mut time = Vec::new();
            let mut gap = Vec::new();
            for (label, runs) in curve_rows(&rows, measure, args)? {
                let paired = runs
                    .into_iter()
                    .map(|r| {
                        gaps.get(&(r.instance.as_str(), r.solver.as_str(), r.cores, r.seed))
                            .map(|&g| (observation(r), g))
                            .ok_or_else(|| {
                                CliError::Data(format!(
                                    "no final_gap for {} / {} at {} cores, seed {}",
                                    r.instance, r.solver, r.cores, r.seed
                                ))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let p = combined_time_gap_profile(&label, &paired);
                csv.profile("time", &p.time);
                csv.profile("gap", &p.gap);
                time.push(p.time);
                gap.push(p.gap);
            }
            let svg = render_svg(
                &Plot::Combined {
                    time: &time,
                    gap: &gap,
                },
                &SvgOptions {
                    title: format!("solved by {measure}, then by final gap"),
                    x_label: measure.to_string(),
                    log_x: args.log_x,
                    ..Default::default()
                },
            )?;
            (svg, time.len())
        }
        ProfileKind::Speedup => {
            let curves = speedup_curves(&rows, args)?;
            for c in &curves {
                let pts = |v: &[(u32, f64)]| v.iter().map(|&(n, s)| (f64::from(n), s)).collect::<Vec<_>>();
                csv.push(&c.label, "speedup", pts(&c.points));
                csv.push(&c.label, "ideal", pts(&c.ideal));
            }
            let basis = match args.basis {
                Basis::Wall => "wall-clock",
                Basis::Pdi => "primal-dual integral",
            };
            let svg = render_svg(
                &Plot::Speedup(&curves),
                &SvgOptions {
                    title: format!("speed-up ({basis} basis)"),
                    x_label: "cores".into(),
                    y_label: "speed-up".into(),
                    log_x: args.log_x,
                    ..Default::default()
                },
            )?;
            (svg, curves.len())
        }
    };

    if let Some(parent) = prefix.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    let csv_path = with_ext(&prefix, "csv");
    let svg_path = with_ext(&prefix, "svg");
    write_file(&csv_path, &csv.0)?;
    write_file(&svg_path, &svg)?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(ProfileOutcome {
        csv: csv_path,
        svg: svg_path,
        curves,
    })
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// One speed-up curve per solver from shifted geometric means per core
/// count. On the wall-clock basis only runs solved at every core count
/// are used, so all means cover the same runs.
fn speedup_curves(rows: &[MeasureRow], args: &ProfileArgs) -> Result<Vec<SpeedupCurve>> {
    let measure = basis_measure(args.basis);
    let mut by_solver: BTreeMap<&str, BTreeMap<String, BTreeMap<u32, &MeasureRow>>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.measure == measure) {
        by_solver
            .entry(r.solver.as_str())
            .or_default()
            .entry(r.run_key())
            .or_default()
            .insert(r.cores, r);
    }
    if by_solver.is_empty() {
        return Err(CliError::Data(format!("no `{measure}` rows for a speed-up curve")));
    }
    let mut curves = Vec::new();
    for (solver, runs) in by_solver {
        let core_counts: BTreeSet<u32> = runs.values().flat_map(|m| m.keys().copied()).collect();
        if !core_counts.contains(&args.baseline) {
            return Err(bnb_assess::Error::MissingBaseline(format!(
                "{solver}: no runs at {} cores",
                args.baseline
            ))
            .into());
        }
        let mut per_cores: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for by_cores in runs.values() {
            let complete = by_cores.len() == core_counts.len()
                && (args.basis == Basis::Pdi || by_cores.values().all(|r| !r.censored));
            if complete {
                for (&n, r) in by_cores {
                    per_cores.entry(n).or_default().push(r.value);
                }
            }
        }
        if per_cores.is_empty() {
            return Err(CliError::Data(format!(
                "{solver}: no run has `{measure}` at every core count"
            )));
        }
        let aggregated: Vec<(u32, f64)> = per_cores
            .iter()
            .map(|(&n, v)| Ok((n, shifted_geometric_mean(v, args.shift)?)))
            .collect::<bnb_assess::Result<_>>()?;
        curves.push(speedup_curve(solver, &aggregated, args.baseline)?);
    }
    Ok(curves)
}
