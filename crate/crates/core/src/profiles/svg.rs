//! Minimal, dependency-free SVG rendering of profile and speed-up plots.
//!
//! Output is a pure function of the input: coordinates are printed with a
//! fixed precision and no map iteration order leaks into the document.

use std::fmt::Write as _;

use super::{ProfileCurve, SpeedupCurve};
use crate::error::{Error, Result};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PANEL_GAP: f64 = 40.0;

pub enum Plot<'a> {
    Profiles(&'a [ProfileCurve]),
    Speedup(&'a [SpeedupCurve]),
    /// Two panels: time curves on the left, final-gap curves on the right.
    Combined {
        time: &'a [ProfileCurve],
        gap: &'a [ProfileCurve],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Base-2 logarithmic x axis.
    pub log_x: bool,
    pub width: u32,
    pub height: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            title: String::new(),
            x_label: String::new(),
            y_label: "fraction of instances".into(),
            log_x: false,
            width: 640,
            height: 420,
        }
    }
}

struct Series {
    label: String,
    color: &'static str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy)]
struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

struct Axis {
    lo: f64,
    hi: f64,
    log2: bool,
}

impl Axis {
    fn t(&self, v: f64) -> f64 {
        if self.log2 {
            v.max(self.lo).log2()
        } else {
            v
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let (lo, hi) = (self.t(self.lo), self.t(self.hi));
        (self.t(v) - lo) / (hi - lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log2 {
            let (a, b) = (self.lo.log2().ceil() as i32, self.hi.log2().floor() as i32);
            let step = ((b - a) / 8 + 1).max(1);
            (a..=b).step_by(step as usize).map(|e| 2f64.powi(e)).collect()
        } else {
            let span = self.hi - self.lo;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| span / s <= 6.0)
                .unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step + 1e-9).floor() as i64;
            (first..=last).map(|k| k as f64 * step).collect()
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    if v == v.round() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Polyline vertices of a right-continuous step curve drawn over
/// `[x_lo, x_hi]`.
fn step_points(curve: &ProfileCurve, x_lo: f64, x_hi: f64, start_level: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![(x_lo, start_level)];
    let mut level = start_level;
    for &(x, f) in &curve.points {
        let x = x.max(x_lo);
        pts.push((x, level));
        pts.push((x, f));
        level = f;
    }
    pts.push((x_hi, level));
    pts
}

fn x_axis_for(xs: impl Iterator<Item = f64>, log_x: bool) -> Axis {
    let xs: Vec<f64> = xs.filter(|x| x.is_finite() && (!log_x || *x > 0.0)).collect();
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if log_x {
        let lo = if min.is_finite() { min.min(1.0) } else { 1.0 };
        let hi = if max.is_finite() { max.max(lo * 2.0) } else { lo * 2.0 };
        Axis {
            lo,
            hi: hi * 1.1,
            log2: true,
        }
    } else {
        let lo = if min.is_finite() { min.min(0.0) } else { 0.0 };
        let hi = if max.is_finite() && max > lo { max } else { lo + 1.0 };
        Axis {
            lo,
            hi: hi + 0.05 * (hi - lo),
            log2: false,
        }
    }
}

fn profile_series(
    curves: &[ProfileCurve],
    axis: &Axis,
    start_level: impl Fn(&ProfileCurve) -> f64,
) -> Vec<Series> {
    curves
        .iter()
        .enumerate()
        .map(|(i, c)| Series {
            label: c.label.clone(),
            color: PALETTE[i % PALETTE.len()],
            dashed: false,
            points: step_points(c, axis.lo, axis.hi, start_level(c)),
        })
        .collect()
}

struct PanelSpec<'a> {
    rect: Rect,
    x: Axis,
    y: Axis,
    x_label: &'a str,
    y_label: &'a str,
    series: Vec<Series>,
}

fn draw_panel(out: &mut String, p: &PanelSpec<'_>) {
    let Rect { x, y, w, h } = p.rect;
    let px = |v: f64| x + p.x.frac(v) * w;
    let py = |v: f64| y + h - p.y.frac(v) * h;

    let _ = writeln!(
        out,
        r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#444"/>"##
    );
    for t in p.x.ticks() {
        let tx = px(t);
        let _ = writeln!(
            out,
            r##"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="#ddd"/>"##,
            y,
            y + h
        );
        let _ = writeln!(
            out,
            r#"<text x="{tx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            y + h + 15.0,
            tick_label(t)
        );
    }
    for t in p.y.ticks() {
        let ty = py(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#ddd"/>"##,
            x + w
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            x - 5.0,
            ty + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        x + w / 2.0,
        y + h + 35.0,
        escape(p.x_label)
    );
    let (lx, ly) = (x - 45.0, y + h / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(p.y_label)
    );

    for s in &p.series {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(a, b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        let dash = if s.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            s.color,
            pts.join(" ")
        );
    }

    // Legend, top-left inside the panel.
    for (i, s) in p.series.iter().enumerate() {
        let ly = y + 14.0 + 16.0 * i as f64;
        let dash = if s.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
            x + 8.0,
            x + 28.0,
            s.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            x + 32.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
}

/// Renders a plot as a standalone SVG document.
pub fn render_svg(plot: &Plot<'_>, opts: &SvgOptions) -> Result<String> {
    let (w, h) = (f64::from(opts.width), f64::from(opts.height));
    let full = Rect {
        x: MARGIN_LEFT,
        y: MARGIN_TOP,
        w: w - MARGIN_LEFT - MARGIN_RIGHT,
        h: h - MARGIN_TOP - MARGIN_BOTTOM,
    };
    let unit_y = || Axis {
        lo: 0.0,
        hi: 1.0,
        log2: false,
    };

    let panels: Vec<PanelSpec<'_>> = match plot {
        Plot::Profiles(curves) => {
            if curves.is_empty() {
                return Err(Error::Empty("no curves to render"));
            }
            let x = x_axis_for(curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)), opts.log_x);
            let series = profile_series(curves, &x, |_| 0.0);
            vec![PanelSpec {
                rect: full,
                x,
                y: unit_y(),
                x_label: &opts.x_label,
                y_label: &opts.y_label,
                series,
            }]
        }
        Plot::Speedup(curves) => {
            if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
                return Err(Error::Empty("no speed-up points to render"));
            }
            let xs = curves
                .iter()
                .flat_map(|c| c.points.iter().map(|p| f64::from(p.0)).chain([f64::from(c.baseline_cores)]));
            let mut x = x_axis_for(xs, opts.log_x);
            if !opts.log_x {
                x.lo = x.lo.max(0.0);
            }
            let y_hi = curves
                .iter()
                .flat_map(|c| c.points.iter().chain(c.ideal.iter()).map(|p| p.1))
                .fold(1.0f64, f64::max);
            let y = Axis {
                lo: 0.0,
                hi: y_hi * 1.05,
                log2: false,
            };
            let mut series = Vec::new();
            // Reference line from the first curve's baseline.
            let c0 = &curves[0];
            let mut ideal = vec![(f64::from(c0.baseline_cores), 1.0)];
            ideal.extend(c0.ideal.iter().map(|&(n, s)| (f64::from(n), s)));
            series.push(Series {
                label: "linear speed-up".into(),
                color: "#2ca02c",
                dashed: true,
                points: ideal,
            });
            for (i, c) in curves.iter().enumerate() {
                let mut pts = vec![(f64::from(c.baseline_cores), 1.0)];
                pts.extend(c.points.iter().map(|&(n, s)| (f64::from(n), s)));
                // Skip the reference line's green.
                let color = PALETTE[(i + usize::from(i >= 2)) % PALETTE.len()];
                series.push(Series {
                    label: c.label.clone(),
                    color,
                    dashed: false,
                    points: pts,
                });
            }
            vec![PanelSpec {
                rect: full,
                x,
                y,
                x_label: &opts.x_label,
                y_label: &opts.y_label,
                series,
            }]
        }
        Plot::Combined { time, gap } => {
            if time.is_empty() && gap.is_empty() {
                return Err(Error::Empty("no curves to render"));
            }
            let half = (full.w - PANEL_GAP) / 2.0;
            let left = Rect { w: half, ..full };
            let right = Rect {
                x: full.x + half + PANEL_GAP,
                w: half,
                ..full
            };
            let tx = x_axis_for(time.iter().flat_map(|c| c.points.iter().map(|p| p.0)), opts.log_x);
            let gx = Axis {
                lo: 0.0,
                hi: 1.0,
                log2: false,
            };
            let t_series = profile_series(time, &tx, |_| 0.0);
            // Gap curves continue from the solved fraction of the time curve
            // with the same label.
            let g_series = profile_series(gap, &gx, |g| {
                time.iter()
                    .find(|t| t.label == g.label)
                    .map_or(0.0, ProfileCurve::max_fraction)
            });
            vec![
                PanelSpec {
                    rect: left,
                    x: tx,
                    y: unit_y(),
                    x_label: &opts.x_label,
                    y_label: &opts.y_label,
                    series: t_series,
                },
                PanelSpec {
                    rect: right,
                    x: gx,
                    y: unit_y(),
                    x_label: "final gap (unsolved instances)",
                    y_label: "",
                    series: g_series,
                },
            ]
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !opts.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            w / 2.0,
            escape(&opts.title)
        );
    }
    for p in &panels {
        draw_panel(&mut out, p);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
