//! Text and CSV rendering for the feasibility calculator: given a problem
//! regime, print the information-theoretic floor, the achievability
//! threshold, the refinement-threshold range, and the verdict.

use btl_topk::bounds::{FeasibilityReport, RegimeSpec};

use crate::{CliError, CliResult};

/// Header of the bounds CSV (one data row per invocation).
pub const BOUNDS_HEADER: &str = "n,p_obs,L,K,delta_K,epsilon,w_min,w_max,\
                                 fano_min_L,separation_L_c1,xi_min,xi_max,classification";

/// Formats a float so that `parse::<f64>()` recovers it exactly; infinities
/// render as `inf`, which Rust's float parser also accepts.
fn num(v: f64) -> String {
    v.to_string()
}

/// Renders the human-readable report.
pub fn render_report(spec: &RegimeSpec, report: &FeasibilityReport) -> String {
    fn line(out: &mut String, label: &str, value: String) {
        out.push_str(&format!("{label:<28}{value}\n"));
    }
    let mut out = String::new();
    let out = &mut out;
    line(out, "items (n):", spec.n.to_string());
    line(out, "edge probability (p_obs):", num(spec.p_obs));
    line(out, "repetitions (L):", num(spec.l));
    line(out, "set size (K):", spec.k.to_string());
    line(out, "separation (delta_K):", num(spec.delta_k));
    line(out, "error budget (epsilon):", num(spec.epsilon));
    line(out, "score box:", format!("[{}, {}]", num(spec.w_min), num(spec.w_max)));
    out.push('\n');
    line(out, "lower bound on L (Fano):", num(report.fano_min_l));
    line(out, "achievability L (c1 = 1):", num(report.separation_l_c1));
    line(
        out,
        "refinement threshold range:",
        format!("[{}, {}]", num(report.xi_min), num(report.xi_max)),
    );
    line(out, "verdict:", report.classification.to_string());
    std::mem::take(out)
}

/// Renders the CSV data row matching [`BOUNDS_HEADER`].
pub fn bounds_csv_row(spec: &RegimeSpec, report: &FeasibilityReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        spec.n,
        num(spec.p_obs),
        num(spec.l),
        spec.k,
        num(spec.delta_k),
        num(spec.epsilon),
        num(spec.w_min),
        num(spec.w_max),
        num(report.fano_min_l),
        num(report.separation_l_c1),
        num(report.xi_min),
        num(report.xi_max),
        report.classification
    )
}

/// Parsed form of a bounds CSV data row (used by the round-trip check).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub n: usize,
    pub p_obs: f64,
    pub l: f64,
    pub k: usize,
    pub delta_k: f64,
    pub epsilon: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub fano_min_l: f64,
    pub separation_l_c1: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub classification: String,
}

/// Parses a two-line bounds CSV (header + one row).
pub fn parse_bounds_csv(text: &str) -> CliResult<BoundsRow> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != BOUNDS_HEADER {
        return Err(CliError::Format(format!(
            "unexpected bounds CSV header `{header}`"
        )));
    }
    let row = lines
        .next()
        .ok_or_else(|| CliError::Format("bounds CSV has no data row".into()))?;
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != 13 {
        return Err(CliError::Format(format!(
            "bounds CSV row has {} fields, expected 13",
            fields.len()
        )));
    }
    let f = |i: usize| -> CliResult<f64> {
        fields[i]
            .parse()
            .map_err(|_| CliError::Format(format!("invalid number `{}`", fields[i])))
    };
    let u = |i: usize| -> CliResult<usize> {
        fields[i]
            .parse()
            .map_err(|_| CliError::Format(format!("invalid count `{}`", fields[i])))
    };
    Ok(BoundsRow {
        n: u(0)?,
        p_obs: f(1)?,
        l: f(2)?,
        k: u(3)?,
        delta_k: f(4)?,
        epsilon: f(5)?,
        w_min: f(6)?,
        w_max: f(7)?,
        fano_min_l: f(8)?,
        separation_l_c1: f(9)?,
        xi_min: f(10)?,
        xi_max: f(11)?,
        classification: fields[12].to_string(),
    })
}
