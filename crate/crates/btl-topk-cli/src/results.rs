//! The results CSV: one aggregated row per (algorithm, grid cell).
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! parsed file re-renders byte-identically; optional fields (`delta_K` for
//! uniform-score sweeps, the success columns when every trial was
//! ambiguous) are empty. `runtime_ms` is wall-clock and therefore the one
//! column excluded from determinism comparisons — it is last so it can be
//! stripped mechanically ([`strip_runtime_column`]).

use std::path::Path;

use crate::{CliError, CliResult};

/// Column header of every results CSV the tool writes.
pub const RESULTS_HEADER: &str = "algo,n,p_obs,L,K,delta_K,trials,linf_mean,linf_se,l2_mean,\
                                  l2_se,success_rate,success_ci_lo,success_ci_hi,ambiguous,failures,runtime_ms";

/// One aggregated sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Algorithm label.
    pub algo: String,
    /// Items.
    pub n: usize,
    /// Observation probability.
    pub p_obs: f64,
    /// Comparisons per observed pair.
    pub l: u64,
    /// Top-set size.
    pub k: usize,
    /// Planted separation; `None` for uniform-score sweeps.
    pub delta_k: Option<f64>,
    /// Trials attempted in this cell.
    pub trials: usize,
    /// Mean / standard error of the aligned ℓ∞ error (absent when every
    /// trial failed).
    pub linf_mean: Option<f64>,
    pub linf_se: Option<f64>,
    /// Mean / standard error of the aligned relative ℓ₂ error.
    pub l2_mean: Option<f64>,
    pub l2_se: Option<f64>,
    /// Top-k success rate over decided trials.
    pub success_rate: Option<f64>,
    /// 95% confidence interval for the rate, clamped to [0, 1].
    pub success_ci_lo: Option<f64>,
    pub success_ci_hi: Option<f64>,
    /// Trials with a tied (undecidable) truth boundary.
    pub ambiguous: usize,
    /// Trials that errored (recorded, never aborting the sweep).
    pub failures: usize,
    /// Mean estimator wall time per completed trial, milliseconds.
    pub runtime_ms: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(field: &str, what: &str) -> CliResult<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| CliError::Format(format!("invalid {what} `{field}`")))
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str) -> CliResult<T> {
    field
        .parse::<T>()
        .map_err(|_| CliError::Format(format!("invalid {what} `{field}`")))
}

impl ResultRow {
    /// The sweep-cell identity of this row: everything up to and including
    /// `delta_K`, formatted exactly as written. Used by the resume logic.
    pub fn cell_key(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.algo,
            self.n,
            self.p_obs,
            self.l,
            self.k,
            opt(self.delta_k)
        )
    }

    /// Renders the CSV line (no trailing newline).
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.cell_key(),
            self.trials,
            opt(self.linf_mean),
            opt(self.linf_se),
            opt(self.l2_mean),
            opt(self.l2_se),
            opt(self.success_rate),
            opt(self.success_ci_lo),
            opt(self.success_ci_hi),
            self.ambiguous,
            self.failures,
            self.runtime_ms
        )
    }

    /// Parses one CSV line.
    pub fn parse(line: &str) -> CliResult<ResultRow> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 17 {
            return Err(CliError::Format(format!(
                "expected 17 fields, got {}: `{line}`",
                f.len()
            )));
        }
        Ok(ResultRow {
            algo: f[0].to_string(),
            n: parse_num(f[1], "item count")?,
            p_obs: parse_num(f[2], "observation probability")?,
            l: parse_num(f[3], "repetition count")?,
            k: parse_num(f[4], "top-set size")?,
            delta_k: parse_opt(f[5], "separation")?,
            trials: parse_num(f[6], "trial count")?,
            linf_mean: parse_opt(f[7], "linf mean")?,
            linf_se: parse_opt(f[8], "linf se")?,
            l2_mean: parse_opt(f[9], "l2 mean")?,
            l2_se: parse_opt(f[10], "l2 se")?,
            success_rate: parse_opt(f[11], "success rate")?,
            success_ci_lo: parse_opt(f[12], "ci low")?,
            success_ci_hi: parse_opt(f[13], "ci high")?,
            ambiguous: parse_num(f[14], "ambiguous count")?,
            failures: parse_num(f[15], "failure count")?,
            runtime_ms: parse_num(f[16], "runtime")?,
        })
    }
}

/// Reads a results CSV, validating the header. A header that lacks
/// expected columns reports exactly which are missing.
pub fn read_results(path: &Path) -> CliResult<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Format(format!("{}: empty file", path.display())))?;
    check_header(path, header)?;
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        rows.push(ResultRow::parse(line).map_err(|e| {
            CliError::Format(format!("{}:{}: {e}", path.display(), idx + 2))
        })?);
    }
    Ok(rows)
}

fn check_header(path: &Path, header: &str) -> CliResult<()> {
    let expected: Vec<&str> = expected_columns();
    let got: Vec<&str> = header.split(',').map(str::trim).collect();
    if got == expected {
        return Ok(());
    }
    let missing: Vec<&str> = expected.iter().filter(|c| !got.contains(c)).copied().collect();
    if missing.is_empty() {
        return Err(CliError::Format(format!(
            "{}: unexpected column order or extras in header",
            path.display()
        )));
    }
    Err(CliError::Format(format!(
        "{}: missing columns: {}",
        path.display(),
        missing.join(", ")
    )))
}

/// The canonical column list.
pub fn expected_columns() -> Vec<&'static str> {
    RESULTS_HEADER.split(',').map(str::trim).collect()
}

/// Creates the file with its header if absent, then appends the rows.
pub fn append_rows(path: &Path, rows: &[ResultRow]) -> CliResult<()> {
    use std::io::Write;
    let fresh = !path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let mut buf = String::new();
    if fresh {
        buf.push_str(&expected_columns().join(","));
        buf.push('\n');
    }
    for row in rows {
        buf.push_str(&row.to_line());
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())
        .and_then(|()| file.flush())
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Drops the final (wall-clock) column from every line, for determinism
/// comparisons.
pub fn strip_runtime_column(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|line| match line.rfind(',') {
            Some(pos) => &line[..pos],
            None => line,
        })
        .collect::<Vec<&str>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            algo: "spectral-mle".into(),
            n: 100,
            p_obs: 0.25,
            l: 5,
            k: 10,
            delta_k: Some(0.1),
            trials: 200,
            linf_mean: Some(0.123456789012345),
            linf_se: Some(0.002),
            l2_mean: Some(0.05),
            l2_se: Some(0.001),
            success_rate: Some(0.95),
            success_ci_lo: Some(0.919),
            success_ci_hi: Some(0.981),
            ambiguous: 0,
            failures: 1,
            runtime_ms: 12.5,
        }
    }

    #[test]
    fn line_round_trips_exactly() {
        let r = row();
        let line = r.to_line();
        assert_eq!(ResultRow::parse(&line).unwrap(), r);
        assert_eq!(line.split(',').count(), 17);
    }

    #[test]
    fn optional_fields_render_empty_and_parse_back() {
        let mut r = row();
        r.delta_k = None;
        r.success_rate = None;
        r.success_ci_lo = None;
        r.success_ci_hi = None;
        let line = r.to_line();
        assert!(line.contains(",,"));
        assert_eq!(ResultRow::parse(&line).unwrap(), r);
    }

    #[test]
    fn header_validation_lists_missing_columns() {
        let dir = std::env::temp_dir().join("btl-topk-results-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "algo,n,p_obs\nx,1,0.5\n").unwrap();
        let e = read_results(&path).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("missing columns"), "{msg}");
        assert!(msg.contains("linf_mean") && msg.contains("runtime_ms"), "{msg}");
        assert_eq!(e.exit_code(), 3);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn append_then_read_round_trips() {
        let dir = std::env::temp_dir().join("btl-topk-results-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("rt-{}.csv", std::process::id()));
        let _ = std::fs::remove_file(&path);
        append_rows(&path, &[row()]).unwrap();
        let mut second = row();
        second.algo = "rank-centrality".into();
        append_rows(&path, &[second.clone()]).unwrap();
        let rows = read_results(&path).unwrap();
        assert_eq!(rows, vec![row(), second]);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn runtime_stripping_drops_only_the_last_field() {
        let text = "a,b,c\n1,2,3\n";
        assert_eq!(strip_runtime_column(text), "a,b\n1,2");
    }
}
