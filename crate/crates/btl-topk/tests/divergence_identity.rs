//! Monte Carlo check of the identity linking the likelihood and the
//! information bounds: for outcomes drawn at truth `w`, the expected
//! one-coordinate log-likelihood gap between truth and any competitor `τ`
//! equals a sum of Bernoulli KL divergences,
//!
//! ```text
//!     E[ ℓ(w) - ℓ(τ) ] = Σ_j KL( Bern(w/(w+w_j)) ‖ Bern(τ/(τ+w_j)) ),
//! ```
//!
//! independent of the per-pair repetition count. The likelihood code and
//! the divergence code share no implementation, so agreement here ties the
//! estimator's objective to the feasibility calculators.

use btl_topk::bounds::bernoulli_kl;
use btl_topk::coord::{coord_loglik, CoordProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

#[test]
fn expected_loglik_gap_equals_the_kl_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_811);
    let l: u64 = 5;
    let truth: f64 = 0.8;
    let tau: f64 = 0.65;
    let neighbors: Vec<f64> = (0..6).map(|_| rng.gen_range(0.5..=1.0)).collect();

    let expected: f64 = neighbors
        .iter()
        .map(|&wj| {
            let p = truth / (truth + wj);
            let q = tau / (tau + wj);
            bernoulli_kl(p, q).unwrap()
        })
        .sum();
    assert!(expected > 0.0, "competitor must be distinguishable");

    let samples = 100_000usize;
    let mut gaps = Vec::with_capacity(samples);
    for _ in 0..samples {
        let y: Vec<f64> = neighbors
            .iter()
            .map(|&wj| {
                let p = truth / (truth + wj);
                let wins = Binomial::new(l, p).unwrap().sample(&mut rng);
                wins as f64 / l as f64
            })
            .collect();
        let problem = CoordProblem::new(0, neighbors.clone(), y, l, 0.5, 1.0).unwrap();
        let gap = coord_loglik(&problem, truth).unwrap() - coord_loglik(&problem, tau).unwrap();
        gaps.push(gap);
    }

    let m = samples as f64;
    let mean = gaps.iter().sum::<f64>() / m;
    let var = gaps.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    assert!(
        (mean - expected).abs() <= 3.0 * se + 1e-12,
        "MC mean {mean} vs KL sum {expected} (3σ = {})",
        3.0 * se
    );
}

#[test]
fn the_gap_identity_holds_for_any_repetition_count() {
    // The identity has no L dependence: check two budgets give the same
    // KL sum target and MC means consistent with it.
    let truth: f64 = 0.9;
    let tau: f64 = 0.7;
    let neighbors = [0.6, 0.75, 0.95];
    let expected: f64 = neighbors
        .iter()
        .map(|&wj| {
            bernoulli_kl(truth / (truth + wj), tau / (tau + wj)).unwrap()
        })
        .sum();

    for (l, seed) in [(1u64, 31u64), (40, 32)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = 60_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..samples {
            let y: Vec<f64> = neighbors
                .iter()
                .map(|&wj| {
                    let p = truth / (truth + wj);
                    Binomial::new(l, p).unwrap().sample(&mut rng) as f64 / l as f64
                })
                .collect();
            let problem =
                CoordProblem::new(0, neighbors.to_vec(), y, l, 0.5, 1.0).unwrap();
            let gap =
                coord_loglik(&problem, truth).unwrap() - coord_loglik(&problem, tau).unwrap();
            sum += gap;
            sumsq += gap * gap;
        }
        let m = samples as f64;
        let mean = sum / m;
        let se = (((sumsq - sum * sum / m) / (m - 1.0)) / m).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * se + 1e-12,
            "L={l}: MC mean {mean} vs KL sum {expected} (3σ = {})",
            3.0 * se
        );
    }
}
