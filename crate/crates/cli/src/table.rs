//! The measures CSV shared by `analyze`, `profile` and `report`.

use std::path::Path;

use bnb_assess::measures::Unit;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 8] = [
    "instance", "solver", "cores", "seed", "measure", "value", "unit", "censored",
];

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    pub instance: String,
    pub solver: String,
    pub cores: u32,
    pub seed: u64,
    pub measure: String,
    pub value: f64,
    pub unit: Unit,
    pub censored: bool,
}

impl MeasureRow {
    /// Identifies a run within one solver and core count.
    pub fn run_key(&self) -> String {
        format!("{}/s{}", self.instance, self.seed)
    }
}

/// Shortest representation that parses back to the same value.
pub fn fmt_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn write_measures(path: &Path, rows: &[MeasureRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::csv(path))?;
    w.write_record(HEADER).map_err(CliError::csv(path))?;
    for r in rows {
        w.write_record([
            r.instance.as_str(),
            r.solver.as_str(),
            &r.cores.to_string(),
            &r.seed.to_string(),
            r.measure.as_str(),
            &fmt_value(r.value),
            r.unit.as_str(),
            if r.censored { "true" } else { "false" },
        ])
        .map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn read_measures(path: &Path) -> Result<Vec<MeasureRow>> {
    let mut r = csv::Reader::from_path(path).map_err(CliError::csv(path))?;
    let header = r.headers().map_err(CliError::csv(path))?.clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::Data(format!(
            "{}: expected columns {}",
            path.display(),
            HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(CliError::csv(path))?;
        let line = i + 2;
        let bad = |what: &str| CliError::Data(format!("{}:{line}: invalid {what}", path.display()));
        rows.push(MeasureRow {
            instance: rec[0].to_string(),
            solver: rec[1].to_string(),
            cores: rec[2].parse().map_err(|_| bad("cores"))?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            measure: rec[4].to_string(),
            value: rec[5].parse().map_err(|_| bad("value"))?,
            unit: rec[6].parse().map_err(|_| bad("unit"))?,
            censored: rec[7].parse().map_err(|_| bad("censored flag"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let rows = vec![
            MeasureRow {
                instance: "a,b".into(),
                solver: "s".into(),
                cores: 4,
                seed: 2,
                measure: "pdi".into(),
                value: 0.1 + 0.2,
                unit: Unit::Seconds,
                censored: false,
            },
            MeasureRow {
                instance: "c".into(),
                solver: "s".into(),
                cores: 1,
                seed: 0,
                measure: "time_to_optimality".into(),
                value: f64::INFINITY,
                unit: Unit::Seconds,
                censored: true,
            },
        ];
        write_measures(&path, &rows).unwrap();
        assert_eq!(read_measures(&path).unwrap(), rows);
    }

    #[test]
    fn rejects_foreign_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_measures(&path), Err(CliError::Data(_))));
    }
}
