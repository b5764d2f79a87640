//! Core types for ranking under the Bradley-Terry-Luce (BTL) comparison model.
//!
//! Items carry positive preference scores `w = (w_1, ..., w_n)`. When items
//! `i` and `j` are compared, `i` wins with probability
//!
//! ```text
//!     P(i beats j) = w_i / (w_i + w_j),
//! ```
//!
//! independently across comparisons. Scores are only identified up to a
//! global scale, so every vector here carries the box `[w_min, w_max]` it
//! lives in and generators anchor the maximum score at `w_max`.
//!
//! Which pairs get compared at all is recorded by a [`ComparisonGraph`];
//! the observed outcomes are summarized per edge by their empirical win
//! frequencies in [`SufficientStats`] (the sufficient statistic for the
//! model — the order of individual comparisons carries no information).

use crate::error::{Error, Result};

/// Positive item scores together with the box `[w_min, w_max]` they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceVector {
    scores: Vec<f64>,
    w_min: f64,
    w_max: f64,
}

impl PreferenceVector {
    /// Validates and wraps a score vector.
    ///
    /// Requires `n >= 2`, `0 < w_min <= w_max`, and every score inside
    /// `[w_min, w_max]`.
    pub fn new(scores: Vec<f64>, w_min: f64, w_max: f64) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::domain(format!(
                "need at least 2 items, got {}",
                scores.len()
            )));
        }
        if !(w_min > 0.0) || !(w_max >= w_min) || !w_max.is_finite() {
            return Err(Error::domain(format!(
                "invalid score box [{w_min}, {w_max}]"
            )));
        }
        for (i, &s) in scores.iter().enumerate() {
            if !(s >= w_min && s <= w_max) {
                return Err(Error::domain(format!(
                    "score {s} of item {i} outside [{w_min}, {w_max}]"
                )));
            }
        }
        Ok(PreferenceVector { scores, w_min, w_max })
    }

    /// Number of items.
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    /// True when the vector is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// The scores as a slice.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Lower edge of the score box.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    /// Upper edge of the score box.
    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// Score of one item.
    pub fn score(&self, i: usize) -> f64 {
        self.scores[i]
    }
}

/// Win probability of the first item in a single BTL comparison.
///
/// Both scores must be positive and finite.
pub fn btl_win_probability(w_i: f64, w_j: f64) -> Result<f64> {
    if !(w_i > 0.0 && w_i.is_finite()) || !(w_j > 0.0 && w_j.is_finite()) {
        return Err(Error::domain(format!(
            "BTL scores must be positive and finite, got ({w_i}, {w_j})"
        )));
    }
    Ok(w_i / (w_i + w_j))
}

/// Normalized score gap between ranks `k` and `k+1`:
/// `(w_(k) - w_(k+1)) / w_max`, where `w_(k)` is the k-th largest score and
/// `w_max` is the box bound carried by the vector.
///
/// Requires `1 <= k < n`. A zero value means ranks `k` and `k+1` are tied
/// and the top-k set is not identifiable.
pub fn separation_measure(w: &PreferenceVector, k: usize) -> Result<f64> {
    let n = w.len();
    if k < 1 || k >= n {
        return Err(Error::domain(format!(
            "separation rank k={k} must satisfy 1 <= k < n={n}"
        )));
    }
    let mut sorted = w.scores().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("scores are finite"));
    Ok((sorted[k - 1] - sorted[k]) / w.w_max())
}

/// Indices of the `k` largest scores, ties broken toward the smaller index.
///
/// The returned indices are sorted ascending (the result is a set; the
/// ordering inside the top-k is not asserted). Requires `1 <= k <= n`.
pub fn top_k_indices(scores: &[f64], k: usize) -> Result<Vec<usize>> {
    let n = scores.len();
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "top-k size k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Stable tie-break: higher score first, then smaller index.
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are finite")
            .then(a.cmp(&b))
    });
    let mut top: Vec<usize> = order[..k].to_vec();
    top.sort_unstable();
    Ok(top)
}

/// Output of a ranking algorithm: the selected top-k set together with the
/// full score estimate it was read off from.
#[derive(Debug, Clone)]
pub struct TopKResult {
    /// Requested set size.
    pub k: usize,
    /// Selected item indices, sorted ascending.
    pub indices: Vec<usize>,
    /// The estimate the selection was derived from.
    pub estimate: PreferenceVector,
}

/// Undirected simple graph over items `0..n` recording which pairs were
/// compared. Edges are stored canonically as `(i, j)` with `i < j`, sorted
/// lexicographically, with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ComparisonGraph {
    /// Validates and canonicalizes an edge list.
    ///
    /// Accepts edges in either orientation; rejects self-loops, duplicate
    /// pairs, and endpoints `>= n`. Requires `n >= 2`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("need at least 2 items, got n={n}")));
        }
        let mut canon: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at item {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) outside item range 0..{n}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate edge".to_string()));
        }
        Ok(ComparisonGraph { n, edges: canon })
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical edge list: `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbor lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Largest vertex degree (0 for an edgeless graph).
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Whether every item is reachable from every other through compared
    /// pairs. Estimators require this; a disconnected graph leaves whole
    /// groups of items mutually incomparable.
    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }
}

/// Per-edge averaged comparison outcomes: for each compared pair,
/// `y(i, j)` is the fraction of the `L` repeated comparisons that `i` won.
///
/// Only the `i < j` direction is stored; the reverse direction is defined by
/// the sum rule `y(j, i) = 1 - y(i, j)`, so the pair of values always sums
/// to one exactly.
#[derive(Debug, Clone)]
pub struct SufficientStats {
    graph: ComparisonGraph,
    /// `y(i, j)` for each canonical edge `(i, j)`, aligned with `graph.edges()`.
    y_upper: Vec<f64>,
    /// Repetitions per pair that the averages were computed from.
    l: u64,
    /// Per-item view: `rows[i]` lists `(j, y(i, j))` for every neighbor `j`,
    /// sorted by `j`. Precomputed because estimators sweep it heavily.
    rows: Vec<Vec<(usize, f64)>>,
}

impl SufficientStats {
    /// Wraps averaged outcomes for the canonical edges of `graph`.
    ///
    /// `y_upper[e]` is the win frequency of the smaller-indexed endpoint of
    /// edge `e` and must lie in `[0, 1]`; `l >= 1` is the number of
    /// comparisons per pair behind each average.
    pub fn new(graph: ComparisonGraph, y_upper: Vec<f64>, l: u64) -> Result<Self> {
        if y_upper.len() != graph.edge_count() {
            return Err(Error::domain(format!(
                "got {} outcomes for {} edges",
                y_upper.len(),
                graph.edge_count()
            )));
        }
        if l == 0 {
            return Err(Error::domain("repetition count L must be >= 1".to_string()));
        }
        for (e, &y) in y_upper.iter().enumerate() {
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::domain(format!(
                    "outcome {y} on edge {:?} outside [0, 1]",
                    graph.edges()[e]
                )));
            }
        }
        let mut rows = vec![Vec::new(); graph.n()];
        for (&(i, j), &y) in graph.edges().iter().zip(&y_upper) {
            rows[i].push((j, y));
            rows[j].push((i, 1.0 - y));
        }
        // Edges are sorted by (i, j), which already yields sorted rows for the
        // first endpoint; sort to make the guarantee unconditional.
        for row in &mut rows {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        Ok(SufficientStats { graph, y_upper, l, rows })
    }

    /// The comparison graph the outcomes sit on.
    pub fn graph(&self) -> &ComparisonGraph {
        &self.graph
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Comparisons per pair.
    pub fn l(&self) -> u64 {
        self.l
    }

    /// Averaged outcomes aligned with the canonical edge list.
    pub fn y_upper(&self) -> &[f64] {
        &self.y_upper
    }

    /// Per-item outcome rows: `rows()[i]` lists `(j, y(i, j))` sorted by `j`.
    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// Win frequency of `i` against `j`, if the pair was compared.
    pub fn y(&self, i: usize, j: usize) -> Option<f64> {
        if i >= self.n() || j >= self.n() || i == j {
            return None;
        }
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(v, _)| v)
            .ok()
            .map(|pos| row[pos].1)
    }

    /// Restriction of the statistics to an edge subset (used for sample
    /// splitting). Every edge of `sub` must be an edge of the full graph.
    pub fn restrict(&self, sub: &ComparisonGraph) -> Result<SufficientStats> {
        if sub.n() != self.n() {
            return Err(Error::domain(format!(
                "subgraph has n={}, statistics have n={}",
                sub.n(),
                self.n()
            )));
        }
        let mut y = Vec::with_capacity(sub.edge_count());
        for &(i, j) in sub.edges() {
            match self.y(i, j) {
                Some(v) => y.push(v),
                None => {
                    return Err(Error::domain(format!(
                        "edge ({i}, {j}) not present in the full statistics"
                    )))
                }
            }
        }
        SufficientStats::new(sub.clone(), y, self.l)
    }
}
