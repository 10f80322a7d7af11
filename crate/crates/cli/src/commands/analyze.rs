use std::path::{Path, PathBuf};

use bnb_assess::measures::{GapDenominator, Measure, MeasureOptions, Tolerances};
use bnb_assess::trace::{read_trace_file, validate_trace, Trace};
use rayon::prelude::*;

use super::{create_dir, Context};
use crate::cli::AnalyzeArgs;
use crate::error::{CliError, Result};
use crate::table::{write_measures, MeasureRow};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutcome {
    pub output: PathBuf,
    pub rows: usize,
    /// One message per trace file that was skipped.
    pub warnings: Vec<String>,
}

fn trace_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(CliError::io(dir))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(CliError::io(dir))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "bbt") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn load(path: &Path) -> std::result::Result<Trace, String> {
    let trace = read_trace_file(path).map_err(|e| e.to_string())?;
    let violations = validate_trace(&trace);
    match violations.first() {
        None => Ok(trace),
        Some(v) if violations.len() == 1 => Err(format!("invalid trace: {}", v.message)),
        Some(v) => Err(format!(
            "invalid trace: {} (and {} more)",
            v.message,
            violations.len() - 1
        )),
    }
}

fn rows_for(trace: &Trace, measures: &[Measure], opts: &MeasureOptions) -> std::result::Result<Vec<MeasureRow>, String> {
    let mut rows = Vec::with_capacity(measures.len());
    for &m in measures {
        let Some(v) = m.evaluate(trace, opts).map_err(|e| format!("{m}: {e}"))? else {
            continue;
        };
        rows.push(MeasureRow {
            instance: trace.run.instance_id.clone(),
            solver: trace.run.solver_id.clone(),
            cores: trace.run.cores,
            seed: trace.run.seed,
            measure: v.name,
            value: v.value,
            unit: v.unit,
            censored: v.censored,
        });
    }
    Ok(rows)
}

/// Computes the requested measures for every `.bbt` file and writes them
/// as one CSV. Unreadable or invalid traces are reported and skipped.
pub fn analyze(ctx: &Context, args: &AnalyzeArgs) -> Result<AnalyzeOutcome> {
    let measures: Vec<Measure> = if args.measures.is_empty() {
        Measure::ALL.to_vec()
    } else {
        args.measures
            .iter()
            .map(|s| s.trim().parse().map_err(|e: bnb_assess::Error| CliError::Usage(e.to_string())))
            .collect::<Result<_>>()?
    };
    let opts = MeasureOptions {
        tolerances: Tolerances {
            rel: args.rel_tol,
            abs: args.abs_tol,
        },
        gap_target: args.gap_target,
        pdi_horizon: args.pdi_horizon,
        denominator: GapDenominator::Max,
    };
    if !(0.0..=1.0).contains(&opts.gap_target) {
        return Err(CliError::Usage(format!("--gap-target {} outside [0, 1]", opts.gap_target)));
    }

    let dirs: Vec<PathBuf> = if !args.trace_dirs.is_empty() {
        args.trace_dirs.clone()
    } else {
        let external: Vec<PathBuf> = ctx
            .manifest
            .iter()
            .flat_map(|m| m.trace_dirs().map(Path::to_path_buf))
            .collect();
        let own = ctx.traces_dir()?;
        // Simulated traces are optional when external ones are given.
        let mut dirs = Vec::new();
        if external.is_empty() || own.exists() {
            dirs.push(own);
        }
        dirs.extend(external);
        dirs
    };
    let mut files = Vec::new();
    for dir in &dirs {
        files.extend(trace_files(dir)?);
    }
    if files.is_empty() {
        return Err(CliError::Data("no .bbt trace files found".into()));
    }

    let results: Vec<std::result::Result<Vec<MeasureRow>, String>> = files
        .par_iter()
        .map(|path| load(path).and_then(|t| rows_for(&t, &measures, &opts)))
        .collect();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(r) => rows.extend(r),
            Err(msg) => {
                let w = format!("{}: {msg}", path.display());
                eprintln!("warning: {w}");
                warnings.push(w);
            }
        }
    }
    if warnings.len() == files.len() {
        return Err(CliError::Data("no readable trace files".into()));
    }

    let output = match &args.output {
        Some(p) => p.clone(),
        None => ctx.measures_csv(None)?,
    };
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    write_measures(&output, &rows)?;
    println!(
        "analyzed {} traces ({} skipped): {} rows written to {}",
        files.len() - warnings.len(),
        warnings.len(),
        rows.len(),
        output.display()
    );
    Ok(AnalyzeOutcome {
        output,
        rows: rows.len(),
        warnings,
    })
}
