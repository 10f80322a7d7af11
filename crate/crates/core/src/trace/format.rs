//! `.bbt` trace files: UTF-8 JSON lines.
//!
//! ```text
//! {"kind":"run","instance":"a","solver":"b","cores":4,"seed":1,"time_limit":60.0,"status":"optimal","wall_time":12.5,"sense":"min"}
//! {"kind":"bound","t":0.000000,"primal":"inf","dual":"-inf"}
//! {"kind":"core","id":0,"start":0.000000,"end":12.500000,"state":"busy"}
//! {"kind":"work","nodes":100,"lps":100,"iters":900}
//! ```
//!
//! Times are written as fixed-point decimal seconds with six fractional
//! digits. Infinite objective values are written as the strings `"inf"` and
//! `"-inf"`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer};

use super::{
    to_micros, BoundEvent, CoreInterval, CoreState, RunRecord, Sense, Status, Trace, WorkCounters,
};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Record {
    Run {
        instance: String,
        solver: String,
        cores: u32,
        seed: u64,
        #[serde(deserialize_with = "ext_real")]
        time_limit: f64,
        status: Status,
        wall_time: f64,
        sense: Sense,
    },
    Bound {
        t: f64,
        #[serde(deserialize_with = "ext_real")]
        primal: f64,
        #[serde(deserialize_with = "ext_real")]
        dual: f64,
    },
    Core {
        id: u32,
        start: f64,
        end: f64,
        state: CoreState,
    },
    Work {
        nodes: u64,
        lps: u64,
        iters: u64,
    },
}

fn ext_real<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Tok(String),
    }
    match Raw::deserialize(de)? {
        Raw::Num(v) => Ok(v),
        Raw::Tok(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!(
                "expected number, \"inf\" or \"-inf\", got {other:?}"
            ))),
        },
    }
}

fn fmt_time(out: &mut String, t: f64) {
    if !t.is_finite() {
        return fmt_real(out, t);
    }
    let us = to_micros(t);
    let sign = if us < 0 { "-" } else { "" };
    let us = us.unsigned_abs();
    let _ = write!(out, "{sign}{}.{:06}", us / 1_000_000, us % 1_000_000);
}

fn fmt_real(out: &mut String, v: f64) {
    if v == f64::INFINITY {
        out.push_str("\"inf\"");
    } else if v == f64::NEG_INFINITY {
        out.push_str("\"-inf\"");
    } else if v.is_nan() {
        out.push_str("null");
    } else {
        // Debug formatting is the shortest representation that round-trips.
        let _ = write!(out, "{v:?}");
    }
}

fn fmt_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serialization"));
}

/// Serializes a trace to `.bbt` text: header, bound events, core
/// intervals, then work totals (if present).
pub fn emit_trace(trace: &Trace) -> String {
    let mut out = String::new();
    let r = &trace.run;
    out.push_str("{\"kind\":\"run\",\"instance\":");
    fmt_str(&mut out, &r.instance_id);
    out.push_str(",\"solver\":");
    fmt_str(&mut out, &r.solver_id);
    let _ = write!(out, ",\"cores\":{},\"seed\":{},\"time_limit\":", r.cores, r.seed);
    fmt_time(&mut out, r.time_limit);
    let _ = write!(out, ",\"status\":\"{}\",\"wall_time\":", r.status.as_str());
    fmt_time(&mut out, r.wall_time);
    let sense = match r.sense {
        Sense::Min => "min",
        Sense::Max => "max",
    };
    let _ = writeln!(out, ",\"sense\":\"{sense}\"}}");

    for e in &trace.bounds {
        out.push_str("{\"kind\":\"bound\",\"t\":");
        fmt_time(&mut out, e.t);
        out.push_str(",\"primal\":");
        fmt_real(&mut out, e.primal);
        out.push_str(",\"dual\":");
        fmt_real(&mut out, e.dual);
        out.push_str("}\n");
    }
    for c in &trace.core_activity {
        let _ = write!(out, "{{\"kind\":\"core\",\"id\":{},\"start\":", c.core_id);
        fmt_time(&mut out, c.start);
        out.push_str(",\"end\":");
        fmt_time(&mut out, c.end);
        let _ = writeln!(out, ",\"state\":\"{}\"}}", c.kind.as_str());
    }
    if let Some(w) = &trace.work {
        let _ = writeln!(
            out,
            "{{\"kind\":\"work\",\"nodes\":{},\"lps\":{},\"iters\":{}}}",
            w.nodes_processed, w.bounding_problems, w.iterations
        );
    }
    out
}

/// Parses `.bbt` text. The first non-blank line must be the run header.
pub fn parse_trace(text: &str) -> Result<Trace> {
    let mut trace: Option<Trace> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let parse_err = |message: &str| Error::Parse {
            line: line_no,
            message: message.to_string(),
        };
        match record {
            Record::Run {
                instance,
                solver,
                cores,
                seed,
                time_limit,
                status,
                wall_time,
                sense,
            } => {
                if trace.is_some() {
                    return Err(parse_err("duplicate run header"));
                }
                trace = Some(Trace::new(RunRecord {
                    instance_id: instance,
                    solver_id: solver,
                    cores,
                    seed,
                    time_limit,
                    status,
                    wall_time,
                    sense,
                }));
            }
            other => {
                let tr = trace
                    .as_mut()
                    .ok_or_else(|| parse_err("record before run header"))?;
                match other {
                    Record::Bound { t, primal, dual } => {
                        tr.bounds.push(BoundEvent::new(t, primal, dual))
                    }
                    Record::Core {
                        id,
                        start,
                        end,
                        state,
                    } => tr
                        .core_activity
                        .push(CoreInterval::new(id, start, end, state)),
                    Record::Work { nodes, lps, iters } => {
                        if tr.work.is_some() {
                            return Err(parse_err("duplicate work record"));
                        }
                        tr.work = Some(WorkCounters {
                            nodes_processed: nodes,
                            bounding_problems: lps,
                            iterations: iters,
                        });
                    }
                    Record::Run { .. } => unreachable!(),
                }
            }
        }
    }
    trace.ok_or(Error::Parse {
        line: 0,
        message: "missing run header".into(),
    })
}

pub fn read_trace_file(path: &Path) -> Result<Trace> {
    parse_trace(&fs::read_to_string(path)?)
}

pub fn write_trace_file(path: &Path, trace: &Trace) -> Result<()> {
    fs::write(path, emit_trace(trace))?;
    Ok(())
}
