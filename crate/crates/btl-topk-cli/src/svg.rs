//! Minimal hand-emitted SVG line charts for the three standard figures:
//! error versus repetition count, error versus edge probability, and
//! success rate versus separation. No drawing library — the output is a
//! deterministic string assembled from the aggregated results CSV.

use std::collections::{BTreeMap, BTreeSet};

use crate::results::ResultRow;
use crate::{CliError, CliResult};

/// Which figure to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Aligned ℓ∞ error against the repetition count L.
    LinfVsL,
    /// Aligned ℓ∞ error against the edge probability p_obs.
    LinfVsPobs,
    /// Top-K success rate against the separation Δ_K.
    SuccessVsDelta,
}

impl FigureKind {
    /// Parses the CLI label.
    pub fn from_label(s: &str) -> Option<FigureKind> {
        match s {
            "linf-vs-L" => Some(FigureKind::LinfVsL),
            "linf-vs-pobs" => Some(FigureKind::LinfVsPobs),
            "success-vs-deltaK" => Some(FigureKind::SuccessVsDelta),
            _ => None,
        }
    }

    fn x_label(self) -> &'static str {
        match self {
            FigureKind::LinfVsL => "L (comparisons per observed pair)",
            FigureKind::LinfVsPobs => "p_obs (edge sampling probability)",
            FigureKind::SuccessVsDelta => "delta_K (score separation)",
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            FigureKind::LinfVsL | FigureKind::LinfVsPobs => "aligned linf error",
            FigureKind::SuccessVsDelta => "top-K success rate",
        }
    }

    /// Y axis fixed to [0, 1] (rates) instead of fitted to the data.
    fn clamp_unit_y(self) -> bool {
        matches!(self, FigureKind::SuccessVsDelta)
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    y: f64,
    /// Error-bar extent (absolute y coordinates).
    lo: f64,
    hi: f64,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const PLOT_LEFT: f64 = 72.0;
const PLOT_RIGHT: f64 = 548.0;
const PLOT_TOP: f64 = 32.0;
const PLOT_BOTTOM: f64 = 420.0;
const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(0.001..10_000.0).contains(&a) {
        return format!("{v:.1e}");
    }
    // Trim trailing zeros of a fixed rendering.
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The value of the swept axis for a row, if present.
fn x_value(kind: FigureKind, row: &ResultRow) -> Option<f64> {
    match kind {
        FigureKind::LinfVsL => Some(row.l as f64),
        FigureKind::LinfVsPobs => Some(row.p_obs),
        FigureKind::SuccessVsDelta => row.delta_k,
    }
}

/// The plotted value and its error-bar bounds, if present.
fn y_value(kind: FigureKind, row: &ResultRow) -> Option<(f64, f64, f64)> {
    match kind {
        FigureKind::LinfVsL | FigureKind::LinfVsPobs => {
            let y = row.linf_mean?;
            let se = row.linf_se.unwrap_or(0.0);
            Some((y, y - se, y + se))
        }
        FigureKind::SuccessVsDelta => {
            let y = row.success_rate?;
            let lo = row.success_ci_lo.unwrap_or(y);
            let hi = row.success_ci_hi.unwrap_or(y);
            Some((y, lo, hi))
        }
    }
}

/// Names of the per-row fields the figure cannot do without.
fn needed_fields(kind: FigureKind) -> &'static [&'static str] {
    match kind {
        FigureKind::LinfVsL | FigureKind::LinfVsPobs => &["linf_mean"],
        FigureKind::SuccessVsDelta => &["delta_K", "success_rate"],
    }
}

/// Builds the series label: the algorithm plus every non-swept axis that
/// takes more than one value in the data, so lines are never overplotted.
fn series_label(kind: FigureKind, row: &ResultRow, varying: &[(&str, bool)]) -> String {
    let mut label = row.algo.clone();
    let axis_value = |name: &str| -> String {
        match name {
            "n" => row.n.to_string(),
            "p_obs" => row.p_obs.to_string(),
            "L" => row.l.to_string(),
            "K" => row.k.to_string(),
            "delta_K" => row.delta_k.map(|d| d.to_string()).unwrap_or_default(),
            _ => unreachable!(),
        }
    };
    let swept = match kind {
        FigureKind::LinfVsL => "L",
        FigureKind::LinfVsPobs => "p_obs",
        FigureKind::SuccessVsDelta => "delta_K",
    };
    for &(name, varies) in varying {
        if varies && name != swept {
            label.push_str(&format!(" {name}={}", axis_value(name)));
        }
    }
    label
}

/// Renders the requested figure from aggregated rows. Rows lacking a value
/// the figure needs make the whole render fail with a message listing the
/// offending fields, so a wrong CSV is caught instead of silently thinned.
pub fn render_figure(rows: &[ResultRow], kind: FigureKind) -> CliResult<String> {
    if rows.is_empty() {
        return Err(CliError::Format("results CSV has no data rows".into()));
    }

    let mut missing: BTreeSet<&str> = BTreeSet::new();
    for row in rows {
        if x_value(kind, row).is_none() {
            missing.insert(needed_fields(kind)[0]);
        }
        if y_value(kind, row).is_none() {
            missing.insert(*needed_fields(kind).last().unwrap());
        }
    }
    if !missing.is_empty() {
        let list: Vec<&str> = missing.into_iter().collect();
        return Err(CliError::Format(format!(
            "figure needs values missing from the CSV: {}",
            list.join(", ")
        )));
    }

    // Which non-swept axes vary (and therefore must appear in the label)?
    let distinct = |f: &dyn Fn(&ResultRow) -> String| -> bool {
        rows.iter().map(f).collect::<BTreeSet<_>>().len() > 1
    };
    let varying: Vec<(&str, bool)> = vec![
        ("n", distinct(&|r: &ResultRow| r.n.to_string())),
        ("p_obs", distinct(&|r: &ResultRow| r.p_obs.to_string())),
        ("L", distinct(&|r: &ResultRow| r.l.to_string())),
        ("K", distinct(&|r: &ResultRow| r.k.to_string())),
        (
            "delta_K",
            distinct(&|r: &ResultRow| r.delta_k.map(|d| d.to_string()).unwrap_or_default()),
        ),
    ];

    let mut series: BTreeMap<String, Vec<Point>> = BTreeMap::new();
    for row in rows {
        let x = x_value(kind, row).expect("checked above");
        let (y, lo, hi) = y_value(kind, row).expect("checked above");
        let (y, lo, hi) = if kind.clamp_unit_y() {
            (y.clamp(0.0, 1.0), lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
        } else {
            (y, lo, hi)
        };
        series
            .entry(series_label(kind, row, &varying))
            .or_default()
            .push(Point { x, y, lo, hi });
    }
    for points in series.values_mut() {
        points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    }

    // Axis ranges: linear x fitted to the data, y either fitted or [0, 1].
    let all = series.values().flatten();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y_top = f64::NEG_INFINITY;
    for p in all {
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        y_top = y_top.max(p.hi);
    }
    if x_min == x_max {
        let pad = (x_min.abs() * 0.1).max(0.5);
        x_min -= pad;
        x_max += pad;
    }
    let (y_min, y_max) = if kind.clamp_unit_y() {
        (0.0, 1.0)
    } else {
        let top = if y_top > 0.0 { y_top * 1.05 } else { 1.0 };
        (0.0, top)
    };

    let sx = |x: f64| PLOT_LEFT + (x - x_min) / (x_max - x_min) * (PLOT_RIGHT - PLOT_LEFT);
    let sy = |y: f64| PLOT_BOTTOM - (y - y_min) / (y_max - y_min) * (PLOT_BOTTOM - PLOT_TOP);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    // Axes.
    out.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = fmt_coord(PLOT_LEFT),
        r = fmt_coord(PLOT_RIGHT),
        t = fmt_coord(PLOT_TOP),
        b = fmt_coord(PLOT_BOTTOM),
    ));

    // Ticks: five per axis, endpoints included.
    for i in 0..=4 {
        let fx = x_min + (x_max - x_min) * (i as f64) / 4.0;
        let px = sx(fx);
        out.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{b2}\" stroke=\"black\"/>\n\
             <text x=\"{x}\" y=\"{ty}\" text-anchor=\"middle\">{label}</text>\n",
            x = fmt_coord(px),
            b = fmt_coord(PLOT_BOTTOM),
            b2 = fmt_coord(PLOT_BOTTOM + 5.0),
            ty = fmt_coord(PLOT_BOTTOM + 18.0),
            label = fmt_tick(fx),
        ));
        let fy = y_min + (y_max - y_min) * (i as f64) / 4.0;
        let py = sy(fy);
        out.push_str(&format!(
            "<line x1=\"{l2}\" y1=\"{y}\" x2=\"{l}\" y2=\"{y}\" stroke=\"black\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" text-anchor=\"end\">{label}</text>\n",
            l = fmt_coord(PLOT_LEFT),
            l2 = fmt_coord(PLOT_LEFT - 5.0),
            y = fmt_coord(py),
            tx = fmt_coord(PLOT_LEFT - 8.0),
            ty = fmt_coord(py + 4.0),
            label = fmt_tick(fy),
        ));
    }

    // Axis labels.
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{label}</text>\n",
        x = fmt_coord((PLOT_LEFT + PLOT_RIGHT) / 2.0),
        y = fmt_coord(HEIGHT - 14.0),
        label = escape(kind.x_label()),
    ));
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 {x} {y})\">{label}</text>\n",
        x = fmt_coord(18.0),
        y = fmt_coord((PLOT_TOP + PLOT_BOTTOM) / 2.0),
        label = escape(kind.y_label()),
    ));

    // Series: error bars under markers, markers over the polyline.
    for (si, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        for p in points {
            let (px, py_lo, py_hi) = (sx(p.x), sy(p.lo), sy(p.hi));
            if p.hi > p.lo {
                out.push_str(&format!(
                    "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"{color}\"/>\n\
                     <line x1=\"{xa}\" y1=\"{y1}\" x2=\"{xb}\" y2=\"{y1}\" stroke=\"{color}\"/>\n\
                     <line x1=\"{xa}\" y1=\"{y2}\" x2=\"{xb}\" y2=\"{y2}\" stroke=\"{color}\"/>\n",
                    x = fmt_coord(px),
                    xa = fmt_coord(px - 3.0),
                    xb = fmt_coord(px + 3.0),
                    y1 = fmt_coord(py_lo),
                    y2 = fmt_coord(py_hi),
                ));
            }
        }
        if points.len() >= 2 {
            let coords: Vec<String> = points
                .iter()
                .map(|p| format!("{},{}", fmt_coord(sx(p.x)), fmt_coord(sy(p.y))))
                .collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                coords.join(" ")
            ));
        }
        for p in points {
            out.push_str(&format!(
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>\n",
                x = fmt_coord(sx(p.x)),
                y = fmt_coord(sy(p.y)),
            ));
        }
        // Legend entry.
        let ly = PLOT_TOP + 8.0 + 18.0 * si as f64;
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" \
             stroke-width=\"1.5\"/>\n\
             <circle cx=\"{xm}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\">{label}</text>\n",
            x1 = fmt_coord(PLOT_RIGHT + 12.0),
            x2 = fmt_coord(PLOT_RIGHT + 34.0),
            xm = fmt_coord(PLOT_RIGHT + 23.0),
            y = fmt_coord(ly),
            tx = fmt_coord(PLOT_RIGHT + 40.0),
            ty = fmt_coord(ly + 4.0),
            label = escape(label),
        ));
    }

    out.push_str("</svg>\n");
    Ok(out)
}
