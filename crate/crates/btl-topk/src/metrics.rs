//! Evaluation metrics and experiment aggregation.
//!
//! Pairwise comparisons identify scores only up to a global scale, so every
//! error metric first aligns the estimate to the truth by the least-squares
//! gauge factor `c = ⟨e, t⟩ / ⟨e, e⟩` (the minimizer of `‖c·e - t‖₂`).
//! After alignment we report the absolute `ℓ∞` error and the `ℓ₂` error
//! relative to `‖t‖₂`.
//!
//! Top-k recovery is scored as a set comparison against the truth's top-k
//! set. When the truth itself has a tie across the rank-k boundary the trial
//! is *ambiguous* — no unique correct answer exists — and it is excluded
//! from success-rate denominators rather than counted either way.

use crate::error::{Error, Result};

/// Z-score of the two-sided 95% normal interval used for success-rate CIs.
pub const Z95: f64 = 1.96;

fn check_finite(name: &str, xs: &[f64]) -> Result<()> {
    if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("{name} contains non-finite entry {bad}")));
    }
    Ok(())
}

/// Rescales `estimate` by the least-squares gauge factor against `truth`,
/// returning `c·estimate` with `c = ⟨e, t⟩ / ⟨e, e⟩`.
///
/// Errors when the vectors are empty, differ in length, contain non-finite
/// entries, or when the estimate is identically zero (no gauge exists).
pub fn gauge_align(estimate: &[f64], truth: &[f64]) -> Result<Vec<f64>> {
    if estimate.is_empty() || estimate.len() != truth.len() {
        return Err(Error::domain(format!(
            "gauge alignment needs matching nonempty vectors, got {} vs {}",
            estimate.len(),
            truth.len()
        )));
    }
    check_finite("estimate", estimate)?;
    check_finite("truth", truth)?;
    let ee: f64 = estimate.iter().map(|e| e * e).sum();
    if ee == 0.0 {
        return Err(Error::domain("cannot align an identically zero estimate".to_string()));
    }
    let et: f64 = estimate.iter().zip(truth).map(|(e, t)| e * t).sum();
    let c = et / ee;
    Ok(estimate.iter().map(|e| c * e).collect())
}

/// Gauge-aligned `ℓ∞` error: `max_i |c·e_i - t_i|`.
pub fn linf_error(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    let aligned = gauge_align(estimate, truth)?;
    Ok(aligned
        .iter()
        .zip(truth)
        .map(|(a, t)| (a - t).abs())
        .fold(0.0, f64::max))
}

/// Gauge-aligned relative `ℓ₂` error: `‖c·e - t‖₂ / ‖t‖₂`.
///
/// Errors when the truth is identically zero.
pub fn l2_rel_error(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    let aligned = gauge_align(estimate, truth)?;
    let tt: f64 = truth.iter().map(|t| t * t).sum();
    if tt == 0.0 {
        return Err(Error::domain("relative error undefined for zero truth".to_string()));
    }
    let dd: f64 = aligned
        .iter()
        .zip(truth)
        .map(|(a, t)| (a - t) * (a - t))
        .sum();
    Ok((dd / tt).sqrt())
}

/// Outcome of one top-k recovery attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopKOutcome {
    /// Selected set equals the truth's unique top-k set.
    Correct,
    /// Selected set differs from the truth's unique top-k set.
    Incorrect,
    /// The truth ties across the rank-k boundary: no unique answer exists.
    Ambiguous,
}

/// Scores a selected index set against the truth's top-k set.
///
/// `selected` must hold exactly `k` distinct indices below `truth.len()`,
/// and `1 <= k < truth.len()`. Returns [`TopKOutcome::Ambiguous`] when the
/// k-th and (k+1)-th largest truth scores coincide.
pub fn topk_success(selected: &[usize], truth: &[f64], k: usize) -> Result<TopKOutcome> {
    let n = truth.len();
    if n < 2 || k < 1 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    check_finite("truth", truth)?;
    if selected.len() != k {
        return Err(Error::domain(format!(
            "selected {} indices, expected {k}",
            selected.len()
        )));
    }
    let mut sel = selected.to_vec();
    sel.sort_unstable();
    if sel.iter().any(|&i| i >= n) || sel.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("selected indices out of range or duplicated".to_string()));
    }
    // Truth ranking, ties broken by index so the boundary check is explicit.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| truth[b].partial_cmp(&truth[a]).unwrap().then(a.cmp(&b)));
    if truth[order[k - 1]] == truth[order[k]] {
        return Ok(TopKOutcome::Ambiguous);
    }
    let mut true_top: Vec<usize> = order[..k].to_vec();
    true_top.sort_unstable();
    Ok(if sel == true_top {
        TopKOutcome::Correct
    } else {
        TopKOutcome::Incorrect
    })
}

/// Result of one Monte Carlo trial of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// Seed the trial's instance was generated from.
    pub trial_seed: u64,
    /// Algorithm label the trial belongs to (aggregation group key).
    pub algo: String,
    /// Gauge-aligned `ℓ∞` score error.
    pub linf: f64,
    /// Gauge-aligned relative `ℓ₂` score error.
    pub l2: f64,
    /// Top-k outcome; `None` marks an ambiguous trial.
    pub success: Option<bool>,
    /// Wall-clock runtime of the estimator, milliseconds.
    pub runtime_ms: f64,
    /// Total coordinate replacements across refinement sweeps, when the
    /// algorithm reports them.
    pub replaced_total: Option<u64>,
}

/// Per-algorithm aggregate over a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoSummary {
    /// Group label.
    pub algo: String,
    /// Total trials aggregated (including ambiguous ones).
    pub trials: usize,
    /// Mean of `linf` over all trials.
    pub linf_mean: f64,
    /// Standard error of `linf_mean` (sample s.d. over √m; 0 when m = 1).
    pub linf_se: f64,
    /// Mean of `l2` over all trials.
    pub l2_mean: f64,
    /// Standard error of `l2_mean`.
    pub l2_se: f64,
    /// Trials with a decided (non-ambiguous) top-k outcome.
    pub decided: usize,
    /// Decided trials that recovered the exact top-k set.
    pub successes: usize,
    /// `successes / decided`; `None` when every trial was ambiguous.
    pub success_rate: Option<f64>,
    /// 95% normal confidence interval for the success rate, clamped to
    /// `[0, 1]`; `None` when the rate is.
    pub success_ci: Option<(f64, f64)>,
    /// Ambiguous trials (excluded from the rate).
    pub ambiguous: usize,
    /// Decided trials that missed the top-k set.
    pub failures: usize,
    /// Mean estimator runtime, milliseconds.
    pub runtime_ms_mean: f64,
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Groups records by algorithm label and summarizes each group. Groups are
/// returned sorted by label so output order is deterministic regardless of
/// record order.
pub fn aggregate(records: &[TrialRecord]) -> Result<Vec<AlgoSummary>> {
    for r in records {
        if !r.linf.is_finite() || !r.l2.is_finite() || !r.runtime_ms.is_finite() {
            return Err(Error::domain(format!(
                "trial {} of '{}' carries non-finite measurements",
                r.trial_seed, r.algo
            )));
        }
    }
    let mut labels: Vec<&str> = records.iter().map(|r| r.algo.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();

    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let group: Vec<&TrialRecord> = records.iter().filter(|r| r.algo == label).collect();
        let linfs: Vec<f64> = group.iter().map(|r| r.linf).collect();
        let l2s: Vec<f64> = group.iter().map(|r| r.l2).collect();
        let (linf_mean, linf_se) = mean_and_se(&linfs);
        let (l2_mean, l2_se) = mean_and_se(&l2s);
        let runtime_ms_mean =
            group.iter().map(|r| r.runtime_ms).sum::<f64>() / group.len() as f64;

        let decided = group.iter().filter(|r| r.success.is_some()).count();
        let successes = group.iter().filter(|r| r.success == Some(true)).count();
        let failures = decided - successes;
        let ambiguous = group.len() - decided;
        let (success_rate, success_ci) = if decided == 0 {
            (None, None)
        } else {
            let rate = successes as f64 / decided as f64;
            let half = Z95 * (rate * (1.0 - rate) / decided as f64).sqrt();
            (
                Some(rate),
                Some(((rate - half).max(0.0), (rate + half).min(1.0))),
            )
        };

        out.push(AlgoSummary {
            algo: label.to_string(),
            trials: group.len(),
            linf_mean,
            linf_se,
            l2_mean,
            l2_se,
            decided,
            successes,
            success_rate,
            success_ci,
            ambiguous,
            failures,
            runtime_ms_mean,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment_matches_the_closed_form() {
        let truth = [1.0, 0.5];
        let estimate = [1.0, 0.6];
        // c = (1·1 + 0.6·0.5) / (1 + 0.36), computed with the same float ops.
        let c = (1.0f64 * 1.0 + 0.6 * 0.5) / (1.0f64 * 1.0 + 0.6 * 0.6);
        let aligned = gauge_align(&estimate, &truth).unwrap();
        assert_eq!(aligned, vec![c * 1.0, c * 0.6]);
        let expected_linf = (c * 1.0 - 1.0).abs().max((c * 0.6 - 0.5).abs());
        assert_eq!(linf_error(&estimate, &truth).unwrap(), expected_linf);
    }

    #[test]
    fn alignment_is_exact_under_power_of_two_rescaling() {
        let truth = [0.9, 0.6, 0.5, 0.8];
        let estimate = [0.84, 0.63, 0.47, 0.81];
        let scaled: Vec<f64> = estimate.iter().map(|e| 4.0 * e).collect();
        assert_eq!(
            linf_error(&estimate, &truth).unwrap(),
            linf_error(&scaled, &truth).unwrap()
        );
        assert_eq!(
            l2_rel_error(&estimate, &truth).unwrap(),
            l2_rel_error(&scaled, &truth).unwrap()
        );
    }

    #[test]
    fn alignment_is_stable_under_general_rescaling() {
        let truth = [0.9, 0.6, 0.5, 0.8];
        let estimate = [0.84, 0.63, 0.47, 0.81];
        let scaled: Vec<f64> = estimate.iter().map(|e| 3.7 * e).collect();
        let a = linf_error(&estimate, &truth).unwrap();
        let b = linf_error(&scaled, &truth).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn perfect_estimate_has_zero_error() {
        let truth = [0.9, 0.6, 0.5, 0.8];
        assert_eq!(linf_error(&truth, &truth).unwrap(), 0.0);
        assert_eq!(l2_rel_error(&truth, &truth).unwrap(), 0.0);
    }

    #[test]
    fn alignment_rejects_degenerate_input() {
        assert!(gauge_align(&[], &[]).is_err());
        assert!(gauge_align(&[1.0], &[1.0, 2.0]).is_err());
        assert!(gauge_align(&[0.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(gauge_align(&[f64::NAN, 1.0], &[1.0, 2.0]).is_err());
        assert!(l2_rel_error(&[1.0, 1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn topk_outcomes() {
        let truth = [0.9, 0.6, 0.5, 0.8];
        assert_eq!(topk_success(&[0, 3], &truth, 2).unwrap(), TopKOutcome::Correct);
        assert_eq!(topk_success(&[3, 0], &truth, 2).unwrap(), TopKOutcome::Correct);
        assert_eq!(topk_success(&[0, 1], &truth, 2).unwrap(), TopKOutcome::Incorrect);
        // Tie across the boundary: 0.6 at ranks 2 and 3.
        let tied = [0.9, 0.6, 0.6, 0.5];
        assert_eq!(topk_success(&[0, 1], &tied, 2).unwrap(), TopKOutcome::Ambiguous);
        // Tie strictly inside the top set is not ambiguous.
        let inner = [0.9, 0.9, 0.6, 0.5];
        assert_eq!(topk_success(&[0, 1], &inner, 2).unwrap(), TopKOutcome::Correct);
    }

    #[test]
    fn topk_rejects_malformed_selections() {
        let truth = [0.9, 0.6, 0.5, 0.8];
        assert!(topk_success(&[0], &truth, 2).is_err(), "wrong cardinality");
        assert!(topk_success(&[0, 0], &truth, 2).is_err(), "duplicate");
        assert!(topk_success(&[0, 9], &truth, 2).is_err(), "out of range");
        assert!(topk_success(&[0, 1], &truth, 4).is_err(), "k = n");
    }

    fn record(algo: &str, linf: f64, success: Option<bool>) -> TrialRecord {
        TrialRecord {
            trial_seed: 7,
            algo: algo.to_string(),
            linf,
            l2: linf / 2.0,
            success,
            runtime_ms: 1.5,
            replaced_total: None,
        }
    }

    #[test]
    fn aggregate_summarizes_per_label_in_sorted_order() {
        let records = vec![
            record("spectral-mle", 0.2, Some(true)),
            record("rank-centrality", 0.4, Some(false)),
            record("spectral-mle", 0.4, Some(true)),
            record("rank-centrality", 0.2, Some(true)),
            record("rank-centrality", 0.3, None),
        ];
        let out = aggregate(&records).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].algo, "rank-centrality");
        assert_eq!(out[1].algo, "spectral-mle");

        let rc = &out[0];
        assert_eq!(rc.trials, 3);
        assert_eq!(rc.decided, 2);
        assert_eq!(rc.ambiguous, 1);
        assert_eq!(rc.failures, 1);
        assert_eq!(rc.success_rate, Some(0.5));
        assert!((rc.linf_mean - 0.3).abs() < 1e-15);
        // Sample s.d. of {0.2, 0.4, 0.3} is 0.1; SE = 0.1/√3.
        assert!((rc.linf_se - 0.1 / 3f64.sqrt()).abs() < 1e-12);
        let (lo, hi) = rc.success_ci.unwrap();
        assert!((0.0..=0.5).contains(&lo) && (0.5..=1.0).contains(&hi));

        let sm = &out[1];
        assert_eq!(sm.success_rate, Some(1.0));
        let (lo, hi) = sm.success_ci.unwrap();
        assert_eq!(hi, 1.0, "upper end clamps at 1");
        assert!(lo <= 1.0);
    }

    #[test]
    fn single_trial_has_zero_standard_error() {
        let out = aggregate(&[record("a", 0.25, Some(true))]).unwrap();
        assert_eq!(out[0].linf_se, 0.0);
        assert_eq!(out[0].l2_se, 0.0);
        assert_eq!(out[0].success_ci, Some((1.0, 1.0)));
    }

    #[test]
    fn all_ambiguous_yields_no_rate() {
        let out = aggregate(&[record("a", 0.25, None), record("a", 0.5, None)]).unwrap();
        assert_eq!(out[0].success_rate, None);
        assert_eq!(out[0].success_ci, None);
        assert_eq!(out[0].ambiguous, 2);
        assert_eq!(out[0].decided, 0);
    }

    #[test]
    fn aggregate_rejects_non_finite_measurements() {
        assert!(aggregate(&[record("a", f64::NAN, Some(true))]).is_err());
    }

    #[test]
    fn group_means_merge_consistently() {
        // Mean over a concatenation equals the trial-count-weighted mean of
        // the parts, up to roundoff.
        let part_a: Vec<TrialRecord> =
            (0..7).map(|i| record("a", 0.1 + 0.01 * i as f64, Some(true))).collect();
        let part_b: Vec<TrialRecord> =
            (0..13).map(|i| record("a", 0.3 + 0.02 * i as f64, Some(false))).collect();
        let all: Vec<TrialRecord> = part_a.iter().chain(&part_b).cloned().collect();
        let ma = aggregate(&part_a).unwrap()[0].linf_mean;
        let mb = aggregate(&part_b).unwrap()[0].linf_mean;
        let mall = aggregate(&all).unwrap()[0].linf_mean;
        let weighted = (7.0 * ma + 13.0 * mb) / 20.0;
        assert!((mall - weighted).abs() < 1e-14);
    }
}
