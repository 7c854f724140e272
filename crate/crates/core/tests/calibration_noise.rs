//! Crisis extrapolation from capital observations with 1% multiplicative noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use harrod::calibration::{extrapolate_crisis, fit_growth_law, ObservedSeries, SeriesKind};

pub const SEED: u64 = 20_240_611;

fn noisy_capital(seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.01).unwrap();
    (1..=20)
        .map(|j| {
            let t = j as f64;
            let k = 1.0 / (1.0 - 0.05 * (t - 0.01 * t * t));
            (t, k * (1.0 + noise.sample(&mut rng)))
        })
        .collect()
}

fn crisis_from(samples: Vec<(f64, f64)>) -> f64 {
    let obs = ObservedSeries::new(samples, SeriesKind::Capital).unwrap();
    let fit = fit_growth_law(&obs, 0.05, 1.0, 2).unwrap();
    extrapolate_crisis(&fit.law, 0.05, 1e-12)
        .unwrap()
        .crisis_time
        .unwrap()
}

#[test]
fn recorded_seed_within_five_percent() {
    let truth = 50.0 - 10.0 * 5f64.sqrt();
    let t = crisis_from(noisy_capital(SEED));
    eprintln!("seed {SEED}: crisis {t:.4} vs {truth:.4}");
    assert!(
        ((t - truth) / truth).abs() <= 0.05,
        "seed {SEED}: {t} vs {truth}"
    );
}

#[test]
fn most_seeds_within_five_percent() {
    let truth = 50.0 - 10.0 * 5f64.sqrt();
    let hits = (0..200)
        .filter(|s| ((crisis_from(noisy_capital(*s)) - truth) / truth).abs() <= 0.05)
        .count();
    assert!(hits >= 180, "{hits} of 200");
}
