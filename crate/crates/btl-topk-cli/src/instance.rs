//! The instance file format: UTF-8 text, diff-able, bit-stable.
//!
//! ```text
//! n=6
//! L=5
//! w_min=5e-1
//! w_max=1
//! truth=1.0000000000000000e0,...      # optional, n values
//! 1,2,4.0000000000000001e-1           # edge lines: i,j,y with 1-based ids
//! ```
//!
//! `y` on an edge line is the fraction of the `L` comparisons won by the
//! line's first endpoint, written with 17 significant digits so the exact
//! double round-trips. The writer emits edges in canonical order (sorted,
//! smaller id first); the reader accepts either endpoint order and
//! normalizes, flipping `y` to `1 - y` when it swaps.

use std::path::Path;

use btl_topk::{ComparisonGraph, PreferenceVector, SufficientStats};

use crate::{CliError, CliResult};

/// One on-disk problem instance: outcomes plus the score box, with the
/// ground truth when the instance is synthetic.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Observed comparison outcomes.
    pub stats: SufficientStats,
    /// Ground-truth scores, when recorded.
    pub truth: Option<PreferenceVector>,
    /// Lower edge of the score box.
    pub w_min: f64,
    /// Upper edge of the score box.
    pub w_max: f64,
}

/// Serializes an instance to the text format.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("n={}\n", inst.stats.n()));
    out.push_str(&format!("L={}\n", inst.stats.l()));
    out.push_str(&format!("w_min={}\n", inst.w_min));
    out.push_str(&format!("w_max={}\n", inst.w_max));
    if let Some(truth) = &inst.truth {
        let joined: Vec<String> = truth.scores().iter().map(|s| format!("{s:.16e}")).collect();
        out.push_str(&format!("truth={}\n", joined.join(",")));
    }
    for (idx, &(i, j)) in inst.stats.graph().edges().iter().enumerate() {
        let y = inst.stats.y_upper()[idx];
        out.push_str(&format!("{},{},{y:.16e}\n", i + 1, j + 1));
    }
    out
}

/// Writes an instance file.
pub fn write_instance(path: &Path, inst: &Instance) -> CliResult<()> {
    std::fs::write(path, render_instance(inst))
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Reads an instance file.
pub fn read_instance(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    parse_instance(&path.display().to_string(), &text)
}

/// Parses instance text (exposed for tests).
pub fn parse_instance(path: &str, text: &str) -> CliResult<Instance> {
    let fail = |line: usize, msg: String| CliError::Format(format!("{path}:{line}: {msg}"));

    let mut n: Option<usize> = None;
    let mut l: Option<u64> = None;
    let mut w_min: Option<f64> = None;
    let mut w_max: Option<f64> = None;
    let mut truth: Option<Vec<f64>> = None;
    let mut edges: Vec<((usize, usize), f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => {
                    n = Some(value.parse().map_err(|_| {
                        fail(line_no, format!("invalid item count `{value}`"))
                    })?)
                }
                "L" => {
                    l = Some(value.parse().map_err(|_| {
                        fail(line_no, format!("invalid repetition count `{value}`"))
                    })?)
                }
                "w_min" => {
                    w_min = Some(value.parse().map_err(|_| {
                        fail(line_no, format!("invalid score bound `{value}`"))
                    })?)
                }
                "w_max" => {
                    w_max = Some(value.parse().map_err(|_| {
                        fail(line_no, format!("invalid score bound `{value}`"))
                    })?)
                }
                "truth" => {
                    let mut scores = Vec::new();
                    for item in value.split(',').map(str::trim) {
                        scores.push(item.parse().map_err(|_| {
                            fail(line_no, format!("invalid truth score `{item}`"))
                        })?);
                    }
                    truth = Some(scores);
                }
                _ => return Err(fail(line_no, format!("unknown header `{key}`"))),
            }
            continue;
        }

        // Edge line: i,j,y with 1-based ids.
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(fail(line_no, format!("expected `i,j,y`, got `{line}`")));
        }
        let i: usize = parts[0]
            .parse()
            .map_err(|_| fail(line_no, format!("invalid item id `{}`", parts[0])))?;
        let j: usize = parts[1]
            .parse()
            .map_err(|_| fail(line_no, format!("invalid item id `{}`", parts[1])))?;
        let y: f64 = parts[2]
            .parse()
            .map_err(|_| fail(line_no, format!("invalid outcome `{}`", parts[2])))?;
        if i == 0 || j == 0 {
            return Err(fail(line_no, "item ids are 1-based".to_string()));
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(fail(line_no, format!("outcome {y} outside [0, 1]")));
        }
        // Canonical orientation: smaller id first, y follows the swap.
        if i < j {
            edges.push(((i - 1, j - 1), y));
        } else {
            edges.push(((j - 1, i - 1), 1.0 - y));
        }
    }

    let n = n.ok_or_else(|| fail(0, "missing `n=` header".to_string()))?;
    let l = l.ok_or_else(|| fail(0, "missing `L=` header".to_string()))?;
    let w_min = w_min.ok_or_else(|| fail(0, "missing `w_min=` header".to_string()))?;
    let w_max = w_max.ok_or_else(|| fail(0, "missing `w_max=` header".to_string()))?;
    if edges.is_empty() {
        return Err(fail(0, "no edge lines".to_string()));
    }

    edges.sort_by_key(|&(e, _)| e);
    let graph = ComparisonGraph::new(n, edges.iter().map(|&(e, _)| e))
        .map_err(CliError::from_core_file)?;
    let y: Vec<f64> = edges.iter().map(|&(_, y)| y).collect();
    let stats = SufficientStats::new(graph, y, l).map_err(CliError::from_core_file)?;
    let truth = match truth {
        None => None,
        Some(scores) => {
            Some(PreferenceVector::new(scores, w_min, w_max).map_err(CliError::from_core_file)?)
        }
    };
    Ok(Instance { stats, truth, w_min, w_max })
}
