//! Distributional contracts of the deterministic stream at desk scale.

use rec_core::harness::{ks_test, two_sample_ks_test, ALPHA};
use rec_core::math::normal_cdf;
use rec_core::DeterministicStream;

const N: usize = 100_000;

#[test]
fn uniform_draws_pass_ks() {
    let mut s = DeterministicStream::new(42, 0);
    let draws: Vec<f64> = (0..N).map(|_| s.next_uniform()).collect();
    let r = ks_test(&draws, |x| x.clamp(0.0, 1.0), ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn uniform_mean_within_clt_window() {
    let mut s = DeterministicStream::new(42, 1);
    let mean: f64 = (0..N).map(|_| s.next_uniform()).sum::<f64>() / N as f64;
    // 3 sigma window for the mean of Unif(0,1): 3 * sqrt(1/12) / sqrt(n)
    assert!((mean - 0.5).abs() < 0.003, "mean={mean}");
}

#[test]
fn exponential_mean_within_clt_window() {
    let mut s = DeterministicStream::new(42, 2);
    let mean: f64 = (0..N).map(|_| s.next_exponential()).sum::<f64>() / N as f64;
    assert!((mean - 1.0).abs() < 0.01, "mean={mean}");
}

#[test]
fn exponential_draws_pass_ks() {
    let mut s = DeterministicStream::new(42, 3);
    let draws: Vec<f64> = (0..N).map(|_| s.next_exponential()).collect();
    let r = ks_test(&draws, |x| 1.0 - (-x).exp(), ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn gaussian_draws_pass_ks() {
    let mut s = DeterministicStream::new(42, 4);
    let draws: Vec<f64> = (0..N).map(|_| s.next_gaussian()).collect();
    let r = ks_test(&draws, normal_cdf, ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn distinct_substreams_are_independent_samples() {
    let mut a = DeterministicStream::new(42, 0);
    let mut b = DeterministicStream::new(42, 1);
    let xa: Vec<f64> = (0..10_000).map(|_| a.next_uniform()).collect();
    let xb: Vec<f64> = (0..10_000).map(|_| b.next_uniform()).collect();
    let r = two_sample_ks_test(&xa, &xb, ALPHA).unwrap();
    assert!(r.pass, "substreams should look like two independent samples");
    assert_ne!(xa[0], xb[0]);
}

#[test]
fn inverse_cdf_monotone_in_underlying_uniform() {
    // larger u gives larger variate for each distribution kind
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    let mut prev_e = f64::NEG_INFINITY;
    let mut prev_g = f64::NEG_INFINITY;
    for &u in &grid {
        let e = -(1.0 - u).ln();
        let g = rec_core::math::normal_quantile(u);
        assert!(e > prev_e);
        assert!(g > prev_g);
        prev_e = e;
        prev_g = g;
    }
}
