//! Behavioral diagnostics of the refinement stage on noisy instances:
//! replacement activity should start high (the spectral initializer leaves
//! coordinate-level slack) and die out as the threshold schedule tightens
//! around the stabilized iterate.

use btl_topk::spectral::{spectral_mle_rank, SpectralMleParams};
use btl_topk::synth::{generate_instance, GenConfig, ScoreScheme};

#[test]
fn replacement_activity_dies_out_across_sweeps() {
    let runs = 20u64;
    let mut quiet_tails = 0usize;
    let mut nonincreasing_pairs = 0usize;
    let mut total_pairs = 0usize;

    for run in 0..runs {
        let config = GenConfig::new(
            40,
            0.4,
            5,
            ScoreScheme::Planted { k: 5, delta_k: 0.2, lo: 0.5, hi: 1.0 },
            9_000 + run,
        );
        let (_, _, stats) = generate_instance(&config).unwrap();
        let (_, trace) = spectral_mle_rank(&stats, &SpectralMleParams::new(5, 0.5, 1.0), run).unwrap();

        let counts: Vec<usize> = trace.sweeps.iter().map(|s| s.replaced).collect();
        assert!(!counts.is_empty());
        // Late sweeps should be (near-)silent once the iterate stabilizes.
        let tail = &counts[counts.len() / 2..];
        if tail.iter().all(|&c| c <= 2) {
            quiet_tails += 1;
        }
        for w in counts.windows(2) {
            total_pairs += 1;
            if w[1] <= w[0] {
                nonincreasing_pairs += 1;
            }
        }
        eprintln!("run {run}: replacements per sweep {counts:?}");
    }

    let quiet_frac = quiet_tails as f64 / runs as f64;
    let mono_frac = nonincreasing_pairs as f64 / total_pairs as f64;
    eprintln!("quiet tails: {quiet_frac:.2}, nonincreasing sweep pairs: {mono_frac:.2}");
    assert!(
        quiet_frac >= 0.9,
        "only {quiet_frac:.2} of runs settled in the second half of the schedule"
    );
    assert!(
        mono_frac >= 0.75,
        "replacement counts rose too often ({mono_frac:.2} nonincreasing)"
    );
}
