//! Top-K ranking from noisy pairwise comparisons.
//!
//! The crate implements the full pipeline for recovering the `K` highest
//! scored items under the Bradley-Terry-Luce comparison model:
//!
//! - [`model`]: scores, comparison graphs, sufficient statistics;
//! - [`synth`]: seeded synthetic instance generation;
//! - [`centrality`]: the spectral (stationary-distribution) estimator;
//! - [`coord`]: one-coordinate maximum-likelihood problems;
//! - [`spectral`]: spectral initialization + iterative coordinate-wise
//!   MLE refinement, the two-stage top-K algorithm;
//! - [`bounds`]: information-theoretic feasibility calculators (when is a
//!   sample budget provably insufficient, when is it provably enough);
//! - [`metrics`]: gauge-aligned estimation errors and Monte Carlo
//!   aggregation for experiment harnesses.

pub mod bounds;
pub mod centrality;
pub mod coord;
pub mod error;
pub mod metrics;
pub mod model;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    btl_win_probability, separation_measure, top_k_indices, ComparisonGraph, PreferenceVector,
    SufficientStats, TopKResult,
};
