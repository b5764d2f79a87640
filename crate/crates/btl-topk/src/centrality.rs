//! Spectral ranking: scores from the stationary distribution of a
//! comparison-driven Markov chain.
//!
//! Given averaged outcomes `y` on a connected comparison graph with maximum
//! degree `d_max`, the chain moves from item `i` to a compared item `j` with
//! probability proportional to how often `j` beat `i`:
//!
//! ```text
//!     P[i][j] = y(j, i) / d_max                for compared pairs (i, j),
//!     P[i][i] = 1 - (1/d_max) * Σ_k y(k, i),   remaining mass stays put.
//! ```
//!
//! Rows sum to one by construction and every entry is nonnegative because
//! no vertex has more than `d_max` neighbors. Under the BTL model the chain
//! is reversible with respect to the score vector: for an edge `(i, j)`,
//! `w_i * P[i][j] = w_i w_j / ((w_i + w_j) d_max)` is symmetric in `i, j`,
//! so with exact outcomes the stationary distribution is proportional to
//! the ground-truth scores — which is why its ordering ranks items.
//!
//! The stationary distribution is computed by power iteration on the lazy
//! chain `(I + P) / 2`. Laziness leaves the stationary distribution
//! untouched while guaranteeing aperiodicity, so the iteration converges on
//! every connected input; the convergence residual is still measured
//! against the original `P`.

use crate::error::{Error, Result};
use crate::model::{PreferenceVector, SufficientStats};

/// Default ℓ₁ residual target for power iteration.
pub const DEFAULT_STATIONARY_TOL: f64 = 1e-10;

/// Default iteration cap for power iteration: generous for desk-scale
/// chains, finite so a pathological chain fails loudly instead of spinning.
pub fn default_max_iters(n: usize) -> usize {
    (10.0 * n as f64 * (n as f64).ln()).ceil() as usize + 1000
}

/// Row-stochastic transition matrix of the comparison chain, stored sparsely
/// (off-diagonal entries exist only for compared pairs).
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    d_max: usize,
    /// `rows[i]`: `(j, P[i][j])` for every neighbor `j` of `i`, sorted by `j`.
    rows: Vec<Vec<(usize, f64)>>,
    /// `diag[i] = P[i][i]`.
    diag: Vec<f64>,
}

impl TransitionMatrix {
    /// Number of items / states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The degree bound used as the row normalizer.
    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Single entry lookup (dense view; zero for non-compared pairs).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.rows[i]
            .binary_search_by_key(&j, |&(v, _)| v)
            .ok()
            .map_or(0.0, |pos| self.rows[i][pos].1)
    }

    /// Left-multiplies a row vector: `out = x P`.
    fn multiply_left(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            out[i] = x[i] * self.diag[i];
        }
        for i in 0..self.n {
            let xi = x[i];
            for &(j, p) in &self.rows[i] {
                out[j] += xi * p;
            }
        }
    }
}

/// Builds the comparison chain from averaged outcomes.
///
/// The graph must be connected (a disconnected graph cannot order all items
/// against each other, and the stationary distribution would not be unique).
pub fn build_transition(stats: &SufficientStats) -> Result<TransitionMatrix> {
    let graph = stats.graph();
    if !graph.is_connected() {
        return Err(Error::Disconnected { n: graph.n(), edges: graph.edge_count() });
    }
    let n = graph.n();
    let d_max = graph.max_degree();
    debug_assert!(d_max >= 1, "connected graph on n >= 2 items has edges");

    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut diag = vec![1.0f64; n];
    let inv_d = 1.0 / d_max as f64;
    for (i, row) in stats.rows().iter().enumerate() {
        let mut off_mass = 0.0;
        for &(j, y_ij) in row {
            // Mass i -> j is driven by j's wins over i; the per-pair win
            // frequencies already sum to one by the storage convention.
            let p_ij = (1.0 - y_ij) * inv_d;
            off_mass += p_ij;
            rows[i].push((j, p_ij));
        }
        diag[i] = 1.0 - off_mass;
        debug_assert!(diag[i] >= -1e-15, "diagonal cannot be negative: deg <= d_max");
    }
    Ok(TransitionMatrix { n, d_max, rows, diag })
}

/// Stationary distribution together with the recorded convergence history.
#[derive(Debug, Clone)]
pub struct Stationary {
    /// The stationary probability vector (entries positive, summing to 1).
    pub pi: Vec<f64>,
    /// ℓ₁ residuals `‖π_t P - π_t‖₁`, one per iteration performed.
    pub residuals: Vec<f64>,
}

impl Stationary {
    /// Number of power-iteration steps performed.
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    /// Final residual `‖π P - π‖₁` of the returned vector.
    pub fn residual(&self) -> f64 {
        *self.residuals.last().expect("at least one iteration")
    }
}

/// Power iteration for the stationary distribution of `p`.
///
/// Iterates the lazy chain `(I + P) / 2` from the uniform vector and stops
/// once `‖π P - π‖₁ <= tol` (measured against the original chain). Fails
/// with [`Error::NoConvergence`] after `max_iters` steps.
pub fn stationary_distribution(
    p: &TransitionMatrix,
    tol: f64,
    max_iters: usize,
) -> Result<Stationary> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("residual tolerance {tol} must be positive")));
    }
    if max_iters == 0 {
        return Err(Error::domain("need max_iters >= 1".to_string()));
    }
    let n = p.n();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0f64; n];
    let mut residuals = Vec::new();

    for _ in 0..max_iters {
        p.multiply_left(&pi, &mut next);
        let residual: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        residuals.push(residual);
        if residual <= tol {
            return Ok(Stationary { pi, residuals });
        }
        // Lazy step: π <- (π + πP) / 2, renormalized against float drift.
        for (cur, nxt) in pi.iter_mut().zip(&next) {
            *cur = 0.5 * (*cur + *nxt);
        }
        let sum: f64 = pi.iter().sum();
        for cur in pi.iter_mut() {
            *cur /= sum;
        }
    }
    Err(Error::NoConvergence {
        tol,
        iters: max_iters,
        residual: *residuals.last().expect("max_iters >= 1"),
    })
}

/// Spectral estimate with its diagnostics.
#[derive(Debug, Clone)]
pub struct RcEstimate {
    /// Stationary distribution rescaled into the `[w_min, w_max]` box
    /// (maximum anchored at `w_max`).
    pub estimate: PreferenceVector,
    /// Raw stationary distribution the estimate was read off from.
    pub pi: Vec<f64>,
    /// Power-iteration steps performed.
    pub iterations: usize,
    /// Final ℓ₁ residual of the stationary solve.
    pub residual: f64,
    /// How many entries fell below `w_min` after rescaling and were clipped
    /// up to it.
    pub clipped: usize,
}

/// The full spectral estimator: build the chain, solve for its stationary
/// distribution, and map it into the score box.
///
/// The stationary vector is rescaled so its maximum sits exactly at `w_max`;
/// entries landing below `w_min` are clipped up to `w_min` and counted in
/// [`RcEstimate::clipped`].
pub fn rank_centrality_estimate(
    stats: &SufficientStats,
    w_min: f64,
    w_max: f64,
    tol: f64,
    max_iters: usize,
) -> Result<RcEstimate> {
    if !(w_min > 0.0 && w_min <= w_max && w_max.is_finite()) {
        return Err(Error::domain(format!("invalid score box [{w_min}, {w_max}]")));
    }
    let p = build_transition(stats)?;
    let st = stationary_distribution(&p, tol, max_iters)?;

    let argmax = (0..st.pi.len())
        .max_by(|&a, &b| st.pi[a].partial_cmp(&st.pi[b]).expect("finite"))
        .expect("n >= 2");
    let scale = w_max / st.pi[argmax];
    let mut clipped = 0usize;
    let scores: Vec<f64> = st
        .pi
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i == argmax {
                return w_max; // anchor the gauge bit-exactly
            }
            let s = x * scale;
            if s < w_min {
                clipped += 1;
                w_min
            } else {
                s.min(w_max)
            }
        })
        .collect();
    let iterations = st.iterations();
    let residual = st.residual();
    Ok(RcEstimate {
        estimate: PreferenceVector::new(scores, w_min, w_max)?,
        pi: st.pi,
        iterations,
        residual,
        clipped,
    })
}
