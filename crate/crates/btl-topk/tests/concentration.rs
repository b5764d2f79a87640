//! Monte Carlo validation of the Bernstein deviation radius used by the
//! refinement analysis: sums of bounded zero-mean variables stay inside
//! the computed radius (which holds with probability at least 1 - 2/nᵃ).

use btl_topk::bounds::bernstein_bound;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sums_of_centered_uniforms_stay_inside_the_radius() {
    // 1000 iid U[-1/2, 1/2]: per-term variance 1/12, magnitude bound 1/2.
    let n = 1000usize;
    let variance_sum = n as f64 / 12.0;
    let radius = bernstein_bound(variance_sum, 0.5, n, 2.0).unwrap();

    // The radius must be a genuine tail bound yet not vacuous: a handful
    // of standard deviations of the sum.
    let sd = variance_sum.sqrt();
    assert!(radius > 3.0 * sd, "radius {radius} too tight to be a 1-2/n² bound");
    assert!(radius < 10.0 * sd, "radius {radius} is vacuously loose");

    let trials = 10_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    let mut exceedances = 0usize;
    let mut max_abs = 0.0f64;
    for _ in 0..trials {
        let mut s = 0.0f64;
        for _ in 0..n {
            s += rng.gen_range(-0.5..=0.5f64);
        }
        max_abs = max_abs.max(s.abs());
        if s.abs() > radius {
            exceedances += 1;
        }
    }
    // Expected exceedance probability at 2/n² = 2e-6 per trial; over 1e4
    // trials the expected count is 0.02, so zero is the only sane outcome.
    assert_eq!(
        exceedances, 0,
        "{exceedances} sums left the radius {radius} (max |S| = {max_abs})"
    );
    // The empirical extreme should approach but not cross the radius.
    assert!(max_abs > 0.2 * radius, "draws implausibly tame: max {max_abs}");
}

#[test]
fn radius_grows_with_the_confidence_exponent() {
    let mut prev = 0.0;
    for a in [2.0, 3.0, 5.0, 8.0] {
        let r = bernstein_bound(50.0, 1.0, 200, a).unwrap();
        assert!(r > prev, "radius must grow with a");
        prev = r;
    }
}
