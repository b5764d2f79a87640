//! Synthetic instance generation: random comparison graphs, planted score
//! vectors, and seeded comparison outcomes.
//!
//! Everything here is deterministic in the configured seed. One root
//! `ChaCha8Rng` is seeded from `GenConfig::seed` and immediately split into
//! three independent sub-seeds, drawn in a fixed order:
//!
//! 1. graph sub-seed (attempt `a` of the connectivity-regeneration loop uses
//!    `graph_seed + a`),
//! 2. score sub-seed,
//! 3. comparison sub-seed.
//!
//! so regenerating a disconnected graph never perturbs the scores or the
//! comparison noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::model::{btl_win_probability, ComparisonGraph, PreferenceVector, SufficientStats};

/// How ground-truth scores are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreScheme {
    /// Scores i.i.d. uniform on `[lo, hi]`, then the maximum anchored at
    /// exactly `hi` so the scale gauge is fixed.
    Uniform { lo: f64, hi: f64 },
    /// Scores arranged so the normalized gap between ranks `k` and `k+1`
    /// equals `delta_k`: the rank-(k+1) score is drawn uniformly, the rank-k
    /// score sits `delta_k * hi` above it, the remaining top block is
    /// uniform between the rank-k score and `hi` (maximum anchored at `hi`),
    /// and the remaining bottom block is uniform between `lo` and the
    /// rank-(k+1) score. Items `0..k` receive the top block in descending
    /// order, so the true top-k set is `{0, ..., k-1}`.
    ///
    /// The two anchor scores are nudged by ulps so the measured separation
    /// reproduces `delta_k` as closely as IEEE arithmetic allows: bit-exactly
    /// whenever `delta_k * hi` is representable on the anchor subtraction
    /// grid (e.g. `delta_k = 0.5` on the `[0.5, 1.0]` box), and within one
    /// ulp of `w_max` otherwise.
    Planted { k: usize, delta_k: f64, lo: f64, hi: f64 },
}

impl ScoreScheme {
    /// Score box `[lo, hi]` of the scheme.
    pub fn score_box(&self) -> (f64, f64) {
        match *self {
            ScoreScheme::Uniform { lo, hi } | ScoreScheme::Planted { lo, hi, .. } => (lo, hi),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let (lo, hi) = self.score_box();
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::config(format!("invalid score range [{lo}, {hi}]")));
        }
        if let ScoreScheme::Planted { k, delta_k, lo, hi } = *self {
            if k < 1 || k >= n {
                return Err(Error::config(format!(
                    "planted rank k={k} must satisfy 1 <= k < n={n}"
                )));
            }
            if !(delta_k >= 0.0) || !delta_k.is_finite() {
                return Err(Error::config(format!("invalid separation {delta_k}")));
            }
            if lo + delta_k * hi > hi {
                return Err(Error::config(format!(
                    "separation {delta_k} too large for score range [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Full description of one synthetic instance.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Number of items (>= 2).
    pub n: usize,
    /// Edge observation probability in `(0, 1]`.
    pub p_obs: f64,
    /// Comparisons per observed pair (>= 1).
    pub l: u64,
    /// Ground-truth score scheme.
    pub scheme: ScoreScheme,
    /// Root seed; everything below derives from it.
    pub seed: u64,
    /// How often to redraw a disconnected graph before giving up.
    pub max_regen_attempts: u32,
    /// Replace sampled outcomes with their exact expectations
    /// `y(i, j) = w_i / (w_i + w_j)` (noise-free instances).
    pub exact_expectation: bool,
}

impl GenConfig {
    /// Config with the defaults used throughout: 100 regeneration attempts,
    /// sampled (not exact) outcomes.
    pub fn new(n: usize, p_obs: f64, l: u64, scheme: ScoreScheme, seed: u64) -> Self {
        GenConfig {
            n,
            p_obs,
            l,
            scheme,
            seed,
            max_regen_attempts: 100,
            exact_expectation: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::config(format!("need n >= 2 items, got {}", self.n)));
        }
        if !(self.p_obs > 0.0 && self.p_obs <= 1.0) {
            return Err(Error::config(format!(
                "observation probability {} outside (0, 1]",
                self.p_obs
            )));
        }
        if self.l == 0 {
            return Err(Error::config("need L >= 1 comparisons per pair".to_string()));
        }
        self.scheme.validate(self.n)
    }
}

/// Erdős–Rényi comparison graph: each of the `n(n-1)/2` pairs is observed
/// independently with probability `p_obs`. Deterministic in `seed`.
pub fn sample_er_graph(n: usize, p_obs: f64, seed: u64) -> Result<ComparisonGraph> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2 items, got {n}")));
    }
    if !(p_obs > 0.0 && p_obs <= 1.0) {
        return Err(Error::domain(format!(
            "observation probability {p_obs} outside (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p_obs {
                edges.push((i, j));
            }
        }
    }
    ComparisonGraph::new(n, edges)
}

/// Draws a ground-truth score vector under `scheme`. Deterministic in `seed`.
///
/// The maximum score is anchored at exactly `hi`; under
/// [`ScoreScheme::Planted`] the measured separation between ranks `k` and
/// `k+1` reproduces `delta_k` to the limit of IEEE arithmetic (see
/// [`ScoreScheme`]).
pub fn sample_scores(scheme: ScoreScheme, n: usize, seed: u64) -> Result<PreferenceVector> {
    scheme.validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = scheme.score_box();
    let scores = match scheme {
        ScoreScheme::Uniform { lo, hi } => {
            let mut s: Vec<f64> = (0..n).map(|_| uniform_in(&mut rng, lo, hi)).collect();
            let argmax = (0..n)
                .max_by(|&a, &b| s[a].partial_cmp(&s[b]).expect("finite scores"))
                .expect("n >= 2");
            s[argmax] = hi;
            s
        }
        ScoreScheme::Planted { k, delta_k, lo, hi } => {
            planted_scores(&mut rng, n, k, delta_k, lo, hi)
        }
    };
    PreferenceVector::new(scores, lo, hi)
}

/// Uniform draw on `[lo, hi)` (or exactly `lo` when the range is degenerate).
fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + rng.gen::<f64>() * (hi - lo)
}

/// Moves a positive float `k` representable values up (`k > 0`) or down.
fn step_ulps(x: f64, k: i64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    f64::from_bits((x.to_bits() as i64 + k) as u64)
}

/// The float gap `m` closest to `delta * hi` whose measured normalized form
/// `m / hi` rounds back to `delta` exactly, when one exists nearby.
fn representable_gap(delta: f64, hi: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let m0 = delta * hi;
    for k in [0i64, 1, -1, 2, -2, 3, -3] {
        let m = step_ulps(m0, k);
        if m > 0.0 && m / hi == delta {
            return m;
        }
    }
    m0
}

/// Places the rank-(k+1) score below a fixed rank-k score so the measured
/// separation `(w_k - w_k1) / hi` is as close to `delta` as representable
/// values permit (searching a few ulps around the seeded position).
fn anchored_below(w_k: f64, m: f64, delta: f64, lo: f64, hi: f64) -> f64 {
    if m == 0.0 {
        return w_k;
    }
    let seed = (w_k - m).max(lo);
    let mut best = (seed, f64::INFINITY);
    for d in [0i64, 1, -1, 2, -2, 3, -3] {
        let w_k1 = step_ulps(seed, d);
        if !(lo..=w_k).contains(&w_k1) {
            continue;
        }
        let err = ((w_k - w_k1) / hi - delta).abs();
        if err == 0.0 {
            return w_k1;
        }
        if err < best.1 {
            best = (w_k1, err);
        }
    }
    best.0
}

/// Places the rank-k / rank-(k+1) pair so that `(w_k - w_k1) / hi` matches
/// `delta` as closely as IEEE arithmetic allows, nudging each value by at
/// most a few ulps from the seeded position.
fn anchored_pair(w_k1_seed: f64, m: f64, delta: f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (w_k1_seed + m, w_k1_seed, f64::INFINITY);
    for dk1 in [0i64, 1, -1, 2, -2, 3, -3] {
        let w_k1 = step_ulps(w_k1_seed, dk1);
        if !(lo..=hi).contains(&w_k1) {
            continue;
        }
        let w_k_seed = w_k1 + m;
        for dk in [0i64, 1, -1, 2, -2, 3, -3] {
            let w_k = if m == 0.0 { w_k1 } else { step_ulps(w_k_seed, dk) };
            if !(w_k1..=hi).contains(&w_k) {
                continue;
            }
            let err = ((w_k - w_k1) / hi - delta).abs();
            if err < best.2 {
                best = (w_k, w_k1, err);
            }
            if err == 0.0 {
                return (w_k, w_k1);
            }
        }
        if m == 0.0 {
            break;
        }
    }
    (best.0, best.1)
}

fn planted_scores(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    delta_k: f64,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let m = representable_gap(delta_k, hi);
    // Rank k+1 is drawn low enough that rank k = rank (k+1) + m fits below hi;
    // for k = 1 the rank-k score doubles as the anchored maximum hi.
    let (w_k, w_k1) = if k == 1 {
        (hi, anchored_below(hi, m, delta_k, lo, hi))
    } else {
        let seed = uniform_in(rng, lo, (hi - m).max(lo));
        anchored_pair(seed, m, delta_k, lo, hi)
    };

    let mut top: Vec<f64> = Vec::with_capacity(k);
    top.push(hi);
    if k >= 2 {
        for _ in 0..(k - 2) {
            top.push(uniform_in(rng, w_k, hi));
        }
        top.push(w_k);
    }
    top.sort_by(|a, b| b.partial_cmp(a).expect("finite scores"));

    let mut bottom: Vec<f64> = Vec::with_capacity(n - k);
    bottom.push(w_k1);
    for _ in 0..(n - k - 1) {
        bottom.push(uniform_in(rng, lo, w_k1));
    }
    bottom.sort_by(|a, b| b.partial_cmp(a).expect("finite scores"));

    top.into_iter().chain(bottom).collect()
}

/// Samples averaged outcomes: for each observed pair, `L` independent BTL
/// comparisons are summarized by the win frequency of the smaller-indexed
/// endpoint. Deterministic in `seed` (edges are visited in canonical order).
pub fn sample_comparisons(
    w: &PreferenceVector,
    graph: &ComparisonGraph,
    l: u64,
    seed: u64,
) -> Result<SufficientStats> {
    check_dims(w, graph)?;
    if l == 0 {
        return Err(Error::domain("need L >= 1 comparisons per pair".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = Vec::with_capacity(graph.edge_count());
    for &(i, j) in graph.edges() {
        let p = btl_win_probability(w.score(i), w.score(j))?;
        let wins = Binomial::new(l, p)
            .map_err(|e| Error::domain(format!("binomial parameters: {e}")))?
            .sample(&mut rng);
        y.push(wins as f64 / l as f64);
    }
    SufficientStats::new(graph.clone(), y, l)
}

/// Noise-free outcomes: `y(i, j)` set to the exact win probability
/// `w_i / (w_i + w_j)`. `l` is recorded as the nominal repetition count.
pub fn exact_comparisons(
    w: &PreferenceVector,
    graph: &ComparisonGraph,
    l: u64,
) -> Result<SufficientStats> {
    check_dims(w, graph)?;
    if l == 0 {
        return Err(Error::domain("need L >= 1 comparisons per pair".to_string()));
    }
    let mut y = Vec::with_capacity(graph.edge_count());
    for &(i, j) in graph.edges() {
        y.push(btl_win_probability(w.score(i), w.score(j))?);
    }
    SufficientStats::new(graph.clone(), y, l)
}

fn check_dims(w: &PreferenceVector, graph: &ComparisonGraph) -> Result<()> {
    if w.len() != graph.n() {
        return Err(Error::domain(format!(
            "{} scores for a graph on {} items",
            w.len(),
            graph.n()
        )));
    }
    Ok(())
}

/// Draws a complete instance: scores, a connected comparison graph, and
/// outcomes. A disconnected graph draw is discarded and redrawn with the
/// next derived seed, up to `max_regen_attempts` times.
pub fn generate_instance(
    config: &GenConfig,
) -> Result<(PreferenceVector, ComparisonGraph, SufficientStats)> {
    config.validate()?;
    let mut root = ChaCha8Rng::seed_from_u64(config.seed);
    let graph_seed: u64 = root.gen();
    let score_seed: u64 = root.gen();
    let comparison_seed: u64 = root.gen();

    let mut graph = None;
    for attempt in 0..config.max_regen_attempts.max(1) {
        let g = sample_er_graph(config.n, config.p_obs, graph_seed.wrapping_add(attempt as u64))?;
        if g.is_connected() {
            graph = Some(g);
            break;
        }
        log::debug!(
            "graph draw {attempt} disconnected (n={}, p_obs={}), redrawing",
            config.n,
            config.p_obs
        );
    }
    let graph = graph.ok_or(Error::GenerationFailed {
        attempts: config.max_regen_attempts.max(1),
        n: config.n,
        p_obs: config.p_obs,
    })?;

    let w = sample_scores(config.scheme, config.n, score_seed)?;
    let stats = if config.exact_expectation {
        exact_comparisons(&w, &graph, config.l)?
    } else {
        sample_comparisons(&w, &graph, config.l, comparison_seed)?
    };
    Ok((w, graph, stats))
}
