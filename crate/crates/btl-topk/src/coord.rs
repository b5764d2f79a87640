//! Single-coordinate maximum likelihood under the BTL model.
//!
//! Fixing every score except item `i`'s, the (1/L-scaled) log-likelihood of
//! the averaged outcomes `y_ij` against frozen neighbor scores `ŵ_j` is
//!
//! ```text
//!     ℓ(τ) = Σ_j [ y_ij · ln(τ / (τ + ŵ_j)) + (1 - y_ij) · ln(ŵ_j / (τ + ŵ_j)) ].
//! ```
//!
//! In the log parameter `θ = ln τ` the derivative takes the form
//!
//! ```text
//!     dℓ/dθ = Σ_j [ y_ij - τ / (τ + ŵ_j) ],     τ = e^θ,
//! ```
//!
//! a sum of terms each strictly decreasing in `θ`, so `ℓ` is concave in `θ`
//! and the box-constrained maximizer is found by bisection on the sign of
//! the derivative — no step-size tuning, bracketing loss, or line search.

use crate::error::{Error, Result};

/// Alias with the recommended default bisection tolerance (in `θ = ln τ`).
pub const DEFAULT_MLE_TOL: f64 = 1e-12;

/// One coordinate-wise likelihood problem: the focal item's observed win
/// frequencies against neighbors whose scores are frozen.
#[derive(Debug, Clone)]
pub struct CoordProblem {
    item: usize,
    neighbor_scores: Vec<f64>,
    y: Vec<f64>,
    l: u64,
    w_min: f64,
    w_max: f64,
}

impl CoordProblem {
    /// Validates and wraps a coordinate problem.
    ///
    /// Requires at least one neighbor, neighbor scores inside
    /// `[w_min, w_max]`, win frequencies in `[0, 1]`, and `l >= 1`.
    pub fn new(
        item: usize,
        neighbor_scores: Vec<f64>,
        y: Vec<f64>,
        l: u64,
        w_min: f64,
        w_max: f64,
    ) -> Result<Self> {
        if neighbor_scores.is_empty() {
            return Err(Error::domain(format!("item {item} has no neighbors")));
        }
        if neighbor_scores.len() != y.len() {
            return Err(Error::domain(format!(
                "{} neighbor scores but {} outcomes",
                neighbor_scores.len(),
                y.len()
            )));
        }
        if !(w_min > 0.0 && w_min <= w_max && w_max.is_finite()) {
            return Err(Error::domain(format!("invalid score box [{w_min}, {w_max}]")));
        }
        if l == 0 {
            return Err(Error::domain("repetition count L must be >= 1".to_string()));
        }
        for &w in &neighbor_scores {
            if !(w >= w_min && w <= w_max) {
                return Err(Error::domain(format!(
                    "neighbor score {w} outside [{w_min}, {w_max}]"
                )));
            }
        }
        for &v in &y {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("win frequency {v} outside [0, 1]")));
            }
        }
        Ok(CoordProblem { item, neighbor_scores, y, l, w_min, w_max })
    }

    /// Focal item index (bookkeeping only; the math never uses it).
    pub fn item(&self) -> usize {
        self.item
    }

    /// Frozen neighbor scores.
    pub fn neighbor_scores(&self) -> &[f64] {
        &self.neighbor_scores
    }

    /// Win frequencies of the focal item against each neighbor.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Comparisons per pair behind each frequency.
    pub fn l(&self) -> u64 {
        self.l
    }

    /// Lower edge of the score box.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    /// Upper edge of the score box.
    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    fn loglik_at(&self, tau: f64) -> f64 {
        let mut sum = 0.0;
        for (&w_j, &y_ij) in self.neighbor_scores.iter().zip(&self.y) {
            let denom = tau + w_j;
            sum += y_ij * (tau / denom).ln() + (1.0 - y_ij) * (w_j / denom).ln();
        }
        sum
    }

    fn dlog_at(&self, theta: f64) -> f64 {
        let tau = theta.exp();
        let mut sum = 0.0;
        for (&w_j, &y_ij) in self.neighbor_scores.iter().zip(&self.y) {
            sum += y_ij - tau / (tau + w_j);
        }
        sum
    }
}

/// The (1/L-scaled) coordinate log-likelihood at candidate score `tau`.
///
/// `tau` must be positive and finite; the value is finite for every such
/// `tau` (the averaged-outcome weights multiply finite logarithms).
pub fn coord_loglik(problem: &CoordProblem, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("candidate score {tau} must be positive")));
    }
    Ok(problem.loglik_at(tau))
}

/// Derivative of the coordinate log-likelihood with respect to `θ = ln τ`,
/// evaluated at `theta`. Nonincreasing in `theta` (the likelihood is concave
/// in the log parameter).
pub fn coord_loglik_dlog(problem: &CoordProblem, theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::domain(format!("log-score {theta} must be finite")));
    }
    Ok(problem.dlog_at(theta))
}

/// Box-constrained coordinate MLE by bisection on the derivative sign over
/// `θ ∈ [ln w_min, ln w_max]`, to absolute `θ`-tolerance `tol`.
///
/// If the derivative never changes sign on the box, the maximizer is the
/// corresponding box edge (concavity makes that exact, not a heuristic).
pub fn coord_mle(problem: &CoordProblem, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let mut lo = problem.w_min.ln();
    let mut hi = problem.w_max.ln();
    if problem.dlog_at(lo) <= 0.0 {
        return Ok(problem.w_min);
    }
    if problem.dlog_at(hi) >= 0.0 {
        return Ok(problem.w_max);
    }
    // Invariant: dℓ/dθ > 0 at lo, < 0 at hi; the root lies between.
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval collapsed to adjacent floats
        }
        if problem.dlog_at(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Grid-search reference maximizer: evaluates [`coord_loglik`] on a uniform
/// grid of `grid_points` candidates spanning `[w_min, w_max]` and returns
/// the best one (ties resolve to the smallest candidate).
///
/// Deliberately brute-force — it exists as an independent cross-check for
/// [`coord_mle`] and is only as accurate as its grid spacing.
pub fn coord_mle_oracle(problem: &CoordProblem, grid_points: usize) -> Result<f64> {
    if grid_points < 100 {
        return Err(Error::domain(format!(
            "need at least 100 grid points, got {grid_points}"
        )));
    }
    let (lo, hi) = (problem.w_min, problem.w_max);
    let step = (hi - lo) / (grid_points - 1) as f64;
    let mut best_tau = lo;
    let mut best_val = f64::NEG_INFINITY;
    for g in 0..grid_points {
        let tau = if g + 1 == grid_points { hi } else { lo + g as f64 * step };
        let val = problem.loglik_at(tau);
        if val > best_val {
            best_val = val;
            best_tau = tau;
        }
    }
    Ok(best_tau)
}
