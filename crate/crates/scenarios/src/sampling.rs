//! Seeded Monte Carlo estimate of `⟨e^{−βW}⟩` from an enumerated work
//! distribution.

use curvtherm::tpm::jarzynski_average;
use curvtherm::WorkDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleEstimate {
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// Value from exact enumeration, for comparison.
    pub exact: f64,
}

/// Draw `samples` works by inverse-CDF sampling and average `e^{−βW}`.
///
/// Output depends only on `(fwd, beta, samples, seed)`.
///
/// # Panics
/// If `samples` is zero.
pub fn sample_work(fwd: &WorkDistribution, beta: f64, samples: usize, seed: u64) -> SampleEstimate {
    assert!(samples >= 1, "sample_work needs at least one sample");
    let points = fwd.points();
    let mut cdf = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    for p in points {
        acc += p.probability;
        cdf.push(acc);
    }
    let total = acc;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford: a constant stream keeps mean and variance exact
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=samples {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(points.len() - 1);
        let x = (-beta * points[idx].work).exp();
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let std_error = if samples > 1 {
        (m2 / (samples - 1) as f64 / samples as f64).sqrt()
    } else {
        0.0
    };
    SampleEstimate {
        samples,
        seed,
        estimate: mean,
        std_error,
        exact: jarzynski_average(fwd, beta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_exact() {
        let d = WorkDistribution::from_pairs([(0.7, 1.0)], 1e-12).unwrap();
        let s = sample_work(&d, 1.3, 1000, 5);
        assert_eq!(s.estimate, (-1.3f64 * 0.7).exp());
        assert_eq!(s.std_error, 0.0);
    }

    #[test]
    fn two_point_within_four_sigma() {
        let d = WorkDistribution::from_pairs([(-1.0, 0.3), (2.0, 0.7)], 1e-12).unwrap();
        let beta = 0.8;
        let exact = 0.3 * (0.8f64).exp() + 0.7 * (-1.6f64).exp();
        let s = sample_work(&d, beta, 100_000, 42);
        assert!((s.exact - exact).abs() < 1e-14);
        assert!(s.std_error > 0.0);
        assert!((s.estimate - exact).abs() < 4.0 * s.std_error, "{s:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let d = WorkDistribution::from_pairs([(-1.0, 0.5), (0.0, 0.25), (1.0, 0.25)], 1e-12).unwrap();
        assert_eq!(sample_work(&d, 1.0, 500, 9), sample_work(&d, 1.0, 500, 9));
        assert_ne!(sample_work(&d, 1.0, 500, 9).estimate, sample_work(&d, 1.0, 500, 10).estimate);
    }
}
