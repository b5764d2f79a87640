//! Information-theoretic feasibility calculators for top-K recovery.
//!
//! Two thresholds bracket the per-pair comparison budget `L`:
//!
//! - **Impossibility (Fano).** Over a family of score assignments that agree
//!   except for one swapped item near the top-K boundary, any method's
//!   worst-case error probability stays above `ε` whenever
//!
//!   ```text
//!       L <= c · ((1 - ε) ln n - 2) / (n p_obs Δ_K²),
//!       c = w_min⁴ / (2 w_max⁴).
//!   ```
//!
//! - **Achievability.** The two-stage estimator provably succeeds (with high
//!   probability) once
//!
//!   ```text
//!       L >= c₁ · ln n / (n p_obs Δ_K²)
//!   ```
//!
//!   for a large enough constant `c₁`.
//!
//! Both scale as `1 / Δ_K²`: halving the score gap demands four times the
//! comparisons. The swap family, the pairwise KL sums that feed the Fano
//! argument, and the Bernoulli divergences they are built from are exposed
//! so the inequalities can be checked by direct enumeration at small `n`.

use crate::error::{Error, Result};

/// KL divergence between Bernoulli(p) and Bernoulli(q), in nats.
///
/// Conventions: `0·ln 0 = 0`; if `q` is 0 or 1 the divergence is `0` when
/// `p == q` and `+∞` otherwise. Requires `p, q ∈ [0, 1]`.
pub fn bernoulli_kl(p: f64, q: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    if p == q {
        return Ok(0.0);
    }
    if q == 0.0 || q == 1.0 {
        return Ok(f64::INFINITY);
    }
    let mut kl = 0.0;
    if p > 0.0 {
        kl += p * (p / q).ln();
    }
    if p < 1.0 {
        kl += (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
    }
    Ok(kl)
}

/// χ² divergence between Bernoulli(p) and Bernoulli(q):
/// `(p - q)² / (q (1 - q))`, the classical upper bound on [`bernoulli_kl`].
///
/// Same conventions and domain as [`bernoulli_kl`].
pub fn bernoulli_chi2(p: f64, q: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    if p == q {
        return Ok(0.0);
    }
    if q == 0.0 || q == 1.0 {
        return Ok(f64::INFINITY);
    }
    let d = p - q;
    Ok(d * d / (q * (1.0 - q)))
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// Enumeration guard: the hypothesis-family calculators are exhaustive
/// O(n²)-per-pair checks meant for small `n`.
pub const MAX_ENUM_N: usize = 12;

/// One hypothesis of the swap family: a candidate top-k set. Under the
/// hypothesis every item in the set has score `w_k` and every other item
/// `w_k1`, so only the set identity distinguishes hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapHypothesis {
    n: usize,
    k: usize,
    /// Sorted member indices, |top| = k.
    top: Vec<usize>,
}

impl SwapHypothesis {
    /// Validates a candidate top set (size `k`, indices `< n`, no
    /// duplicates).
    pub fn new(n: usize, k: usize, mut top: Vec<usize>) -> Result<Self> {
        if n < 2 || n > MAX_ENUM_N {
            return Err(Error::domain(format!(
                "hypothesis enumeration supports 2 <= n <= {MAX_ENUM_N}, got {n}"
            )));
        }
        if k < 1 || k >= n {
            return Err(Error::domain(format!("need 1 <= k < n, got k={k}, n={n}")));
        }
        top.sort_unstable();
        if top.len() != k {
            return Err(Error::domain(format!(
                "top set has {} members, expected {k}",
                top.len()
            )));
        }
        if top.windows(2).any(|w| w[0] == w[1]) || top.iter().any(|&i| i >= n) {
            return Err(Error::domain("top set has duplicate or out-of-range items".to_string()));
        }
        Ok(SwapHypothesis { n, k, top })
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Top-set size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The hypothesized top set, sorted.
    pub fn top(&self) -> &[usize] {
        &self.top
    }

    /// Score assignment under this hypothesis.
    pub fn scores(&self, w_k: f64, w_k1: f64) -> Vec<f64> {
        let mut s = vec![w_k1; self.n];
        for &i in &self.top {
            s[i] = w_k;
        }
        s
    }

    fn swap_distance(&self, other: &SwapHypothesis) -> usize {
        self.top.iter().filter(|i| !other.top.contains(i)).count()
    }
}

/// The minimax swap family used by the Fano argument: `max{k, n-k} + 1`
/// hypotheses whose top sets pairwise differ by swapping at most one item
/// across the rank-k boundary.
///
/// For `k < n/2` the fixed block is ranks 2..k and the swapped slot cycles
/// through item 0 and every item outside the top; for `k >= n/2` each
/// hypothesis drops one item from the first `k+1`.
pub fn swap_family(n: usize, k: usize) -> Result<Vec<SwapHypothesis>> {
    if n < 2 || n > MAX_ENUM_N {
        return Err(Error::domain(format!(
            "hypothesis enumeration supports 2 <= n <= {MAX_ENUM_N}, got {n}"
        )));
    }
    if k < 1 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    let mut family = Vec::new();
    if 2 * k < n {
        // k < n/2: fix items 1..k, swap the remaining slot.
        let base: Vec<usize> = (1..k).collect();
        let mut candidates = vec![0usize];
        candidates.extend(k..n);
        for i in candidates {
            let mut top = base.clone();
            top.push(i);
            family.push(SwapHypothesis::new(n, k, top)?);
        }
    } else {
        // k >= n/2: drop one of the first k+1 items.
        for i in 0..=k {
            let top: Vec<usize> = (0..=k).filter(|&j| j != i).collect();
            family.push(SwapHypothesis::new(n, k, top)?);
        }
    }
    Ok(family)
}

/// Sum over all ordered item pairs of the KL divergence between the
/// comparison distributions induced by two swap hypotheses:
///
/// ```text
///     Σ_{i≠j} KL( Bern(s¹_i/(s¹_i+s¹_j)) ‖ Bern(s²_i/(s²_i+s²_j)) ),
/// ```
///
/// where `s¹, s²` assign `w_k` to hypothesized top items and `w_k1`
/// elsewhere. This is the quantity the Fano bound caps by
/// `(2 w_max⁴ / w_min⁴) · n · Δ_K²`.
///
/// Requires `w_k >= w_k1 > 0` and hypotheses from the same family (same
/// `n`, `k`, differing by at most one swapped item).
pub fn hypothesis_kl_sum(
    h1: &SwapHypothesis,
    h2: &SwapHypothesis,
    w_k: f64,
    w_k1: f64,
) -> Result<f64> {
    if h1.n != h2.n || h1.k != h2.k {
        return Err(Error::domain(format!(
            "hypotheses disagree on shape: ({}, {}) vs ({}, {})",
            h1.n, h1.k, h2.n, h2.k
        )));
    }
    if !(w_k1 > 0.0 && w_k >= w_k1 && w_k.is_finite()) {
        return Err(Error::domain(format!(
            "need w_k >= w_k1 > 0, got ({w_k}, {w_k1})"
        )));
    }
    if h1.swap_distance(h2) > 1 {
        return Err(Error::domain(
            "hypotheses differ by more than one swapped item".to_string(),
        ));
    }
    let s1 = h1.scores(w_k, w_k1);
    let s2 = h2.scores(w_k, w_k1);
    let mut sum = 0.0;
    for i in 0..h1.n {
        for j in 0..h1.n {
            if i == j {
                continue;
            }
            let p = s1[i] / (s1[i] + s1[j]);
            let q = s2[i] / (s2[i] + s2[j]);
            sum += bernoulli_kl(p, q)?;
        }
    }
    Ok(sum)
}

/// A sampling regime to classify: problem size, observation rate, comparison
/// budget, separation, and the score box.
#[derive(Debug, Clone, Copy)]
pub struct RegimeSpec {
    /// Number of items (>= 2).
    pub n: usize,
    /// Edge observation probability in `(0, 1]`.
    pub p_obs: f64,
    /// Comparisons per observed pair (positive; real-valued so thresholds
    /// can be compared against it directly).
    pub l: f64,
    /// Normalized score gap at the top-k boundary (>= 0).
    pub delta_k: f64,
    /// Top-set size (`1 <= k < n`).
    pub k: usize,
    /// Lower edge of the score box.
    pub w_min: f64,
    /// Upper edge of the score box.
    pub w_max: f64,
    /// Tolerated error probability in `(0, 1/2)`.
    pub epsilon: f64,
}

impl RegimeSpec {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("need n >= 2 items, got {}", self.n)));
        }
        if !(self.p_obs > 0.0 && self.p_obs <= 1.0) {
            return Err(Error::domain(format!(
                "observation probability {} outside (0, 1]",
                self.p_obs
            )));
        }
        if !(self.l > 0.0) || !self.l.is_finite() {
            return Err(Error::domain(format!("budget L = {} must be positive", self.l)));
        }
        if !(self.delta_k >= 0.0) || !self.delta_k.is_finite() {
            return Err(Error::domain(format!("separation {} must be >= 0", self.delta_k)));
        }
        if self.k < 1 || self.k >= self.n {
            return Err(Error::domain(format!(
                "need 1 <= k < n, got k={}, n={}",
                self.k, self.n
            )));
        }
        if !(self.w_min > 0.0 && self.w_min <= self.w_max && self.w_max.is_finite()) {
            return Err(Error::domain(format!(
                "invalid score box [{}, {}]",
                self.w_min, self.w_max
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::domain(format!(
                "error tolerance {} outside (0, 1/2)",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Largest per-pair budget that provably precludes reliable top-k recovery:
/// any `L` at or below this value forces worst-case error probability above
/// `ε` for every method.
///
/// Returns `0` when the Fano numerator `(1-ε) ln n - 2` is nonpositive (the
/// argument is vacuous at tiny `n`), and the `+∞` sentinel when
/// `delta_k = 0` with a positive numerator (no budget suffices for tied
/// scores).
pub fn fano_min_l(spec: &RegimeSpec) -> Result<f64> {
    spec.validate()?;
    let numer = (1.0 - spec.epsilon) * (spec.n as f64).ln() - 2.0;
    if numer <= 0.0 {
        return Ok(0.0);
    }
    let c = spec.w_min.powi(4) / (2.0 * spec.w_max.powi(4));
    Ok(c * numer / (spec.n as f64 * spec.p_obs * spec.delta_k * spec.delta_k))
}

/// Budget threshold of the achievability guarantee with constant `c1`:
/// `c1 ln n / (n p_obs Δ_K²)`. Returns the `+∞` sentinel when
/// `delta_k = 0`.
pub fn separation_criterion_l(spec: &RegimeSpec, c1: f64) -> Result<f64> {
    spec.validate()?;
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(Error::domain(format!("constant c1 = {c1} must be positive")));
    }
    Ok(c1 * (spec.n as f64).ln() / (spec.n as f64 * spec.p_obs * spec.delta_k * spec.delta_k))
}

/// Bernstein deviation radius for a sum of independent, zero-mean variables
/// with `Σ E[z²] = variance_sum` and `|z| <= b`:
///
/// ```text
///     sqrt(2 a ln n · variance_sum) + (2a/3) · b · ln n,
/// ```
///
/// which the sum exceeds with probability at most `2 n^{-a}`. Requires
/// `a >= 2`, `n >= 2`, nonnegative `variance_sum` and `b`.
pub fn bernstein_bound(variance_sum: f64, b: f64, n: usize, a: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    if !(a >= 2.0) || !a.is_finite() {
        return Err(Error::domain(format!("exponent a = {a} must be >= 2")));
    }
    if !(variance_sum >= 0.0) || !variance_sum.is_finite() {
        return Err(Error::domain(format!("variance sum {variance_sum} must be >= 0")));
    }
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::domain(format!("magnitude bound {b} must be >= 0")));
    }
    let log_n = (n as f64).ln();
    Ok((2.0 * a * log_n * variance_sum).sqrt() + (2.0 * a / 3.0) * b * log_n)
}

/// Where a regime's budget sits relative to the two thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeClass {
    /// At or below the Fano threshold: no method can succeed.
    BelowLowerBound,
    /// Between the thresholds: not provably impossible, not provably easy.
    Between,
    /// At or above the achievability threshold (with the given `c1`).
    AboveAchievability,
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeClass::BelowLowerBound => "below lower bound (provably infeasible)",
            RegimeClass::Between => "between bounds",
            RegimeClass::AboveAchievability => "above achievability threshold",
        };
        f.write_str(s)
    }
}

/// Feasibility summary of one regime.
#[derive(Debug, Clone, Copy)]
pub struct FeasibilityReport {
    /// Impossibility threshold ([`fano_min_l`]).
    pub fano_min_l: f64,
    /// Achievability threshold at `c1 = 1` ([`separation_criterion_l`]).
    pub separation_l_c1: f64,
    /// Echoed separation.
    pub delta_k: f64,
    /// Refinement threshold floor `sqrt(ln n / (n p_obs L))`.
    pub xi_min: f64,
    /// Refinement threshold ceiling `sqrt(ln n / (p_obs L))`.
    pub xi_max: f64,
    /// Classification of the regime's own `L` against the two thresholds.
    pub classification: RegimeClass,
}

/// Computes both thresholds (achievability at `c1 = 1`), the refinement
/// threshold range, and classifies the regime's budget. Classification
/// checks the impossibility side first, so a degenerate spec where the
/// intervals touch reports the stronger statement.
pub fn feasibility_report(spec: &RegimeSpec) -> Result<FeasibilityReport> {
    spec.validate()?;
    let fano = fano_min_l(spec)?;
    let sep = separation_criterion_l(spec, 1.0)?;
    let log_n = (spec.n as f64).ln();
    let xi_min = (log_n / (spec.n as f64 * spec.p_obs * spec.l)).sqrt();
    let xi_max = (log_n / (spec.p_obs * spec.l)).sqrt();
    let classification = if spec.l <= fano {
        RegimeClass::BelowLowerBound
    } else if spec.l >= sep {
        RegimeClass::AboveAchievability
    } else {
        RegimeClass::Between
    };
    Ok(FeasibilityReport {
        fano_min_l: fano,
        separation_l_c1: sep,
        delta_k: spec.delta_k,
        xi_min,
        xi_max,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> RegimeSpec {
        RegimeSpec {
            n: 100,
            p_obs: 0.2,
            l: 5.0,
            delta_k: 0.3,
            k: 10,
            w_min: 0.5,
            w_max: 1.0,
            epsilon: 0.25,
        }
    }

    #[test]
    fn kl_of_equal_distributions_is_zero() {
        for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
            assert_eq!(bernoulli_kl(p, p).unwrap(), 0.0);
            assert_eq!(bernoulli_chi2(p, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn kl_hand_value() {
        // KL(1/2 || 1/4) = 0.5 ln 2 + 0.5 ln(2/3).
        let kl = bernoulli_kl(0.5, 0.25).unwrap();
        assert!((kl - 0.143841).abs() < 1e-6, "got {kl}");
        let direct = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        assert!((kl - direct).abs() < 1e-15);
    }

    #[test]
    fn chi2_hand_value() {
        // (1/2 - 1/4)² / (1/4 · 3/4) = 1/3, all factors dyadic.
        assert_eq!(bernoulli_chi2(0.5, 0.25).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn boundary_q_yields_the_infinity_sentinel() {
        assert_eq!(bernoulli_kl(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(bernoulli_kl(0.5, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(bernoulli_chi2(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(bernoulli_kl(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(bernoulli_kl(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn divergences_reject_out_of_range() {
        assert!(bernoulli_kl(-0.1, 0.5).is_err());
        assert!(bernoulli_kl(0.5, 1.1).is_err());
        assert!(bernoulli_chi2(2.0, 0.5).is_err());
    }

    #[test]
    fn pinsker_and_chi2_sandwich_on_a_grid() {
        // 2(p-q)² <= KL <= χ² across the interior grid, no violations.
        for pi in 0..=100 {
            let p = pi as f64 / 100.0;
            for qi in 1..=99 {
                let q = qi as f64 / 100.0;
                let kl = bernoulli_kl(p, q).unwrap();
                let chi2 = bernoulli_chi2(p, q).unwrap();
                let pinsker = 2.0 * (p - q) * (p - q);
                assert!(kl >= pinsker - 1e-12, "Pinsker violated at ({p}, {q})");
                assert!(kl <= chi2 + 1e-12, "chi-square domination violated at ({p}, {q})");
            }
        }
    }

    #[test]
    fn family_size_is_max_plus_one() {
        for n in 2..=12usize {
            for k in 1..n {
                let fam = swap_family(n, k).unwrap();
                assert_eq!(fam.len(), k.max(n - k) + 1, "n={n}, k={k}");
                for h in &fam {
                    assert_eq!(h.top().len(), k);
                }
                // Pairwise single-swap structure.
                for a in &fam {
                    for b in &fam {
                        assert!(a.swap_distance(b) <= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn family_enumeration_is_capped() {
        assert!(swap_family(13, 3).is_err());
        assert!(SwapHypothesis::new(13, 3, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn kl_sum_examples() {
        let fam = swap_family(4, 2).unwrap();
        // Identical hypotheses: zero.
        assert_eq!(hypothesis_kl_sum(&fam[0], &fam[0], 1.0, 0.7).unwrap(), 0.0);
        // Distinct hypotheses: strictly positive, finite.
        let s = hypothesis_kl_sum(&fam[0], &fam[1], 1.0, 0.7).unwrap();
        assert!(s > 0.0 && s.is_finite());
        // Tied scores make all hypotheses indistinguishable.
        assert_eq!(hypothesis_kl_sum(&fam[0], &fam[1], 0.7, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn kl_sum_rejects_malformed_pairs() {
        let fam4 = swap_family(4, 2).unwrap();
        let fam5 = swap_family(5, 2).unwrap();
        assert!(hypothesis_kl_sum(&fam4[0], &fam5[0], 1.0, 0.7).is_err(), "shape mismatch");
        assert!(hypothesis_kl_sum(&fam4[0], &fam4[1], 0.7, 1.0).is_err(), "w_k < w_k1");
        // Two swaps apart: not a family-adjacent pair.
        let a = SwapHypothesis::new(6, 3, vec![0, 1, 2]).unwrap();
        let b = SwapHypothesis::new(6, 3, vec![0, 4, 5]).unwrap();
        assert!(hypothesis_kl_sum(&a, &b, 1.0, 0.7).is_err());
    }

    #[test]
    fn distributions_differ_on_few_pairs() {
        // One swapped item touches at most 2n unordered pairs.
        let fam = swap_family(10, 3).unwrap();
        let (w_k, w_k1) = (1.0, 0.7);
        for a in &fam {
            for b in &fam {
                let s1 = a.scores(w_k, w_k1);
                let s2 = b.scores(w_k, w_k1);
                let mut differing = 0usize;
                for i in 0..10 {
                    for j in (i + 1)..10 {
                        let p = s1[i] / (s1[i] + s1[j]);
                        let q = s2[i] / (s2[i] + s2[j]);
                        if p != q {
                            differing += 1;
                        }
                    }
                }
                assert!(differing <= 2 * 10, "{differing} pairs differ");
            }
        }
    }

    #[test]
    fn kl_sum_obeys_the_separation_cap_exhaustively() {
        // Σ KL <= (2 w_max⁴ / w_min⁴) n Δ² for every family pair; box
        // [0.5, 1.0], one representative score pair per run (the full value
        // sweep lives in the acceptance suite).
        let (w_min, w_max) = (0.5f64, 1.0f64);
        let (w_k, w_k1) = (1.0f64, 0.7f64);
        let delta = (w_k - w_k1) / w_max;
        let cap_factor = 2.0 * w_max.powi(4) / w_min.powi(4);
        for n in 4..=12usize {
            for k in 1..n {
                let fam = swap_family(n, k).unwrap();
                for a in &fam {
                    for b in &fam {
                        let s = hypothesis_kl_sum(a, b, w_k, w_k1).unwrap();
                        let cap = cap_factor * n as f64 * delta * delta;
                        assert!(s <= cap + 1e-12, "n={n} k={k}: {s} > {cap}");
                    }
                }
            }
        }
    }

    #[test]
    fn fano_threshold_hand_value() {
        // c = 0.5⁴/2 = 0.03125; numer = 0.75 ln 100 - 2; denom = 100·0.2·0.09.
        let l = fano_min_l(&spec()).unwrap();
        assert!((l - 0.025241).abs() < 1e-6, "got {l}");
    }

    #[test]
    fn fano_is_monotone_in_separation() {
        let mut prev = f64::INFINITY;
        for delta in [0.05, 0.1, 0.2, 0.4] {
            let l = fano_min_l(&RegimeSpec { delta_k: delta, ..spec() }).unwrap();
            assert!(l < prev, "threshold must fall as separation grows");
            prev = l;
        }
    }

    #[test]
    fn fano_vanishes_when_the_numerator_does() {
        // (1-ε) ln 2 - 2 < 0: the argument is vacuous.
        let l = fano_min_l(&RegimeSpec { n: 2, k: 1, ..spec() }).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn zero_separation_reports_infinity() {
        let s = RegimeSpec { delta_k: 0.0, ..spec() };
        assert_eq!(fano_min_l(&s).unwrap(), f64::INFINITY);
        assert_eq!(separation_criterion_l(&s, 1.0).unwrap(), f64::INFINITY);
        let report = feasibility_report(&s).unwrap();
        assert_eq!(report.classification, RegimeClass::BelowLowerBound);
    }

    #[test]
    fn separation_criterion_hand_value() {
        // ln 100 / (100 · 0.2 · 0.09) = 2.5584278811...
        let l = separation_criterion_l(&spec(), 1.0).unwrap();
        assert!((l - 2.5584278811).abs() < 1e-9, "got {l}");
        // Linear in c1.
        let l2 = separation_criterion_l(&spec(), 3.0).unwrap();
        assert!((l2 - 3.0 * l).abs() < 1e-12);
    }

    #[test]
    fn fano_sits_below_achievability() {
        // c <= 1/2 and (1-ε) ln n - 2 < ln n, so the window is never empty.
        for n in [10usize, 50, 100, 500] {
            for delta in [0.05, 0.2, 0.4] {
                let s = RegimeSpec { n, k: n / 3 + 1, delta_k: delta, ..spec() };
                assert!(fano_min_l(&s).unwrap() < separation_criterion_l(&s, 1.0).unwrap());
            }
        }
    }

    #[test]
    fn bernstein_formula_direct() {
        let r = bernstein_bound(333.0, 1.0, 1000, 2.0).unwrap();
        let log_n = 1000f64.ln();
        let direct = (2.0 * 2.0 * log_n * 333.0).sqrt() + (4.0 / 3.0) * log_n;
        assert_eq!(r, direct);
        assert!(bernstein_bound(1.0, 1.0, 1000, 1.5).is_err(), "a < 2");
        assert!(bernstein_bound(-1.0, 1.0, 1000, 2.0).is_err());
    }

    #[test]
    fn classification_flips_with_the_budget() {
        let low = RegimeSpec { l: 0.02, ..spec() };
        assert_eq!(
            feasibility_report(&low).unwrap().classification,
            RegimeClass::BelowLowerBound
        );
        let mid = spec(); // L = 5 clears the c1 = 1 threshold of ~2.56.
        assert_eq!(
            feasibility_report(&mid).unwrap().classification,
            RegimeClass::AboveAchievability
        );
        let between = RegimeSpec { l: 1.0, ..spec() };
        assert_eq!(
            feasibility_report(&between).unwrap().classification,
            RegimeClass::Between
        );
        let huge = RegimeSpec { l: 1e6, ..spec() };
        assert_eq!(
            feasibility_report(&huge).unwrap().classification,
            RegimeClass::AboveAchievability
        );
    }

    #[test]
    fn report_carries_the_threshold_range() {
        let r = feasibility_report(&spec()).unwrap();
        let log_n = 100f64.ln();
        assert!((r.xi_min - (log_n / (100.0 * 0.2 * 5.0)).sqrt()).abs() < 1e-15);
        assert!((r.xi_max - (log_n / (0.2 * 5.0)).sqrt()).abs() < 1e-15);
        assert!(r.xi_max > r.xi_min);
        assert_eq!(r.delta_k, 0.3);
    }
}
