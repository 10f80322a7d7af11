use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::IsTerminal;
use std::path::PathBuf;

use bnb_assess::aggregate::{
    aggregate, per_instance_scalability, AggregationPolicy, Censoring, ScalabilityIssue,
    ScalingObservation, DEFAULT_NODE_SHIFT, DEFAULT_TIME_SHIFT,
};
use bnb_assess::measures::{parallel_efficiency, speedup, MeasureValue};

use super::{create_dir, write_file, Context};
use crate::cli::ReportArgs;
use crate::error::Result;
use crate::table::{read_measures, MeasureRow};

/// Set to disable ANSI styling of the report on stdout.
pub const NO_COLOR_ENV: &str = "BNB_ASSESS_NO_COLOR";

const TIME: &str = "time_to_optimality";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOutcome {
    /// Report text as written to `report.txt`.
    pub text: String,
    pub report: PathBuf,
    pub summary: PathBuf,
}

#[derive(Debug, Default)]
struct Group<'a> {
    time: Vec<&'a MeasureRow>,
    pdi: Vec<&'a MeasureRow>,
    nodes: Vec<&'a MeasureRow>,
}

struct SummaryRow {
    solver: String,
    cores: u32,
    runs: usize,
    unsolved: usize,
    sg_time: Option<f64>,
    sg_pdi: Option<f64>,
    sg_nodes: Option<f64>,
    speedup: Option<f64>,
    efficiency: Option<f64>,
}

fn values(rows: &[&MeasureRow]) -> Vec<MeasureValue> {
    rows.iter()
        .map(|r| MeasureValue {
            name: r.measure.clone(),
            value: r.value,
            unit: r.unit,
            censored: r.censored,
        })
        .collect()
}

fn sg(rows: &[&MeasureRow], shift: f64) -> Result<Option<f64>> {
    if rows.is_empty() {
        return Ok(None);
    }
    let policy = AggregationPolicy::shifted_geometric(shift, Censoring::CensorAtLimit);
    Ok(aggregate(&values(rows), &policy)?.value)
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.digits$}"))
}

/// Renders rows as aligned columns; the first `text_cols` columns are
/// left-aligned, the rest right-aligned.
fn render_table(header: &[&str], rows: &[Vec<String>], text_cols: usize) -> (String, String) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i < text_cols { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let head = line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let mut body = String::new();
    for r in rows {
        body.push_str(&line(r));
        body.push('\n');
    }
    (head, body)
}

/// Summarizes a measures CSV: shifted geometric means and unsolved counts
/// per solver and core count, then per-instance scalability.
pub fn report(ctx: &Context, args: &ReportArgs) -> Result<ReportOutcome> {
    let input = ctx.measures_csv(args.input.as_deref())?;
    let rows = read_measures(&input)?;

    let mut groups: BTreeMap<(&str, u32), Group> = BTreeMap::new();
    for r in &rows {
        let g = groups.entry((r.solver.as_str(), r.cores)).or_default();
        match r.measure.as_str() {
            TIME => g.time.push(r),
            "pdi" => g.pdi.push(r),
            "nodes" => g.nodes.push(r),
            _ => {}
        }
    }

    let mut summary = Vec::new();
    let mut baselines: BTreeMap<&str, (u32, Option<f64>)> = BTreeMap::new();
    for (&(solver, cores), g) in &groups {
        let sg_time = sg(&g.time, DEFAULT_TIME_SHIFT)?;
        // Groups are ordered by core count within a solver.
        let &mut (base_cores, base_time) = baselines.entry(solver).or_insert((cores, sg_time));
        let s = match (base_time, sg_time) {
            (Some(b), Some(t)) => Some(speedup(b, t)?),
            _ => None,
        };
        let e = s.map(|s| {
            if base_cores == 1 {
                parallel_efficiency(s, cores)
            } else {
                s * f64::from(base_cores) / f64::from(cores)
            }
        });
        summary.push(SummaryRow {
            solver: solver.to_string(),
            cores,
            runs: g.time.len(),
            unsolved: g.time.iter().filter(|r| r.censored).count(),
            sg_time,
            sg_pdi: sg(&g.pdi, DEFAULT_TIME_SHIFT)?,
            sg_nodes: sg(&g.nodes, DEFAULT_NODE_SHIFT)?,
            speedup: s,
            efficiency: e,
        });
    }

    let mut text = String::new();
    let mut headings = Vec::new();
    if let Some(m) = &ctx.manifest {
        let _ = writeln!(text, "time limit: {} s\n", m.time_limit);
    }
    headings.push(text.len());
    text.push_str("Shifted geometric means by solver and core count\n");
    let cells: Vec<Vec<String>> = summary
        .iter()
        .map(|r| {
            vec![
                r.solver.clone(),
                r.cores.to_string(),
                r.runs.to_string(),
                r.unsolved.to_string(),
                fmt_opt(r.sg_time, 4),
                fmt_opt(r.sg_pdi, 4),
                fmt_opt(r.sg_nodes, 1),
                fmt_opt(r.speedup, 3),
                fmt_opt(r.efficiency, 3),
            ]
        })
        .collect();
    let (head, body) = render_table(
        &["solver", "cores", "runs", "unsolved", "time", "pdi", "nodes", "speedup", "efficiency"],
        &cells,
        1,
    );
    let _ = writeln!(text, "{head}\n{body}");
    let _ = writeln!(
        text,
        "time = {TIME} (unsolved runs count at the time limit), shift {DEFAULT_TIME_SHIFT}; \
         pdi shift {DEFAULT_TIME_SHIFT}; nodes shift {DEFAULT_NODE_SHIFT}\n"
    );

    headings.push(text.len());
    text.push_str("Per-instance scalability of time_to_optimality\n");
    let mut by_solver: BTreeMap<&str, Vec<ScalingObservation>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.measure == TIME) {
        by_solver.entry(r.solver.as_str()).or_default().push(ScalingObservation {
            instance: r.run_key(),
            cores: r.cores,
            value: values(&[r]).remove(0),
        });
    }
    let mut cells = Vec::new();
    let mut notes = Vec::new();
    for (solver, obs) in &by_solver {
        let rep = per_instance_scalability(obs)?;
        for rec in rep.records.iter().filter(|r| r.cores != r.baseline_cores) {
            cells.push(vec![
                solver.to_string(),
                rec.instance.clone(),
                rec.cores.to_string(),
                format!("{:.3}", rec.speedup),
                format!("{:.3}", rec.efficiency),
            ]);
        }
        for issue in &rep.issues {
            notes.push(match issue {
                ScalabilityIssue::MissingBaseline { instance } => {
                    format!("{solver} {instance}: no baseline run")
                }
                ScalabilityIssue::CensoredBaseline { instance } => {
                    format!("{solver} {instance}: baseline run unsolved")
                }
                ScalabilityIssue::Censored { instance, cores } => {
                    format!("{solver} {instance}: unsolved at {cores} cores")
                }
            });
        }
    }
    if cells.is_empty() {
        text.push_str("(no runs at more than one core count)\n");
    } else {
        let (head, body) = render_table(&["solver", "run", "cores", "speedup", "efficiency"], &cells, 2);
        let _ = writeln!(text, "{head}\n{body}");
    }
    if !notes.is_empty() {
        text.push_str("\nskipped:\n");
        for n in &notes {
            let _ = writeln!(text, "  {n}");
        }
    }

    let out = ctx.out_dir()?;
    create_dir(out)?;
    let report_path = out.join("report.txt");
    let summary_path = out.join("summary.csv");
    write_file(&report_path, &text)?;
    let mut csv = String::from(
        "solver,cores,runs,unsolved,sg_time_to_optimality,sg_pdi,sg_nodes,speedup,efficiency\n",
    );
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in &summary {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.solver,
            r.cores,
            r.runs,
            r.unsolved,
            opt(r.sg_time),
            opt(r.sg_pdi),
            opt(r.sg_nodes),
            opt(r.speedup),
            opt(r.efficiency)
        );
    }
    write_file(&summary_path, &csv)?;

    let color = std::env::var_os(NO_COLOR_ENV).is_none() && std::io::stdout().is_terminal();
    print!("{}", styled(&text, &headings, color));
    Ok(ReportOutcome {
        text,
        report: report_path,
        summary: summary_path,
    })
}

/// Bolds the heading lines starting at the given byte offsets.
fn styled(text: &str, headings: &[usize], color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len() + 16 * headings.len());
    let mut pos = 0;
    for &h in headings {
        let end = h + text[h..].find('\n').unwrap_or(text.len() - h);
        out.push_str(&text[pos..h]);
        out.push_str("\x1b[1m");
        out.push_str(&text[h..end]);
        out.push_str("\x1b[0m");
        pos = end;
    }
    out.push_str(&text[pos..]);
    out
}
