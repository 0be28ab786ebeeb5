//! Goodness-of-fit tests at the single documented operating point alpha = 0.01.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

/// Asymptotic one-sample KS coefficient at alpha = 0.01.
pub const KS_COEFF_001: f64 = 1.63;
pub const ALPHA: f64 = 0.01;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("need at least {min} samples, got {n}")]
    InsufficientSamples { n: usize, min: usize },
    #[error("expected count {expected:.2} in cell {cell} is below 5")]
    LowExpectedCount { cell: usize, expected: f64 },
    #[error("only alpha = 0.01 is supported for KS thresholds, got {0}")]
    UnsupportedAlpha(f64),
    #[error("counts and pmf disagree in length: {counts} vs {pmf}")]
    LengthMismatch { counts: usize, pmf: usize },
    #[error(transparent)]
    Codec(#[from] crate::codec::CodecError),
    #[error(transparent)]
    Model(#[from] crate::models::ModelError),
    #[error(transparent)]
    Selection(#[from] crate::selection::SelectionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Ks,
    ChiSquare,
}

/// Outcome of one test: `pass` iff `statistic < threshold`.
#[derive(Debug, Clone, Copy)]
pub struct GofResult {
    pub kind: TestKind,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: usize,
}

impl GofResult {
    fn new(kind: TestKind, statistic: f64, threshold: f64, n: usize) -> Self {
        Self {
            kind,
            statistic,
            threshold,
            pass: statistic < threshold,
            n,
        }
    }
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    v
}

/// One-sample Kolmogorov-Smirnov test against a target CDF.
pub fn ks_test(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    alpha: f64,
) -> Result<GofResult, HarnessError> {
    if alpha != ALPHA {
        return Err(HarnessError::UnsupportedAlpha(alpha));
    }
    let n = samples.len();
    if n < 100 {
        return Err(HarnessError::InsufficientSamples { n, min: 100 });
    }
    let xs = sorted(samples);
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    Ok(GofResult::new(TestKind::Ks, d, KS_COEFF_001 / nf.sqrt(), n))
}

/// Two-sample Kolmogorov-Smirnov test; used for equality-in-distribution
/// claims (runtime laws), where it is conservative on integer-valued data.
pub fn two_sample_ks_test(a: &[f64], b: &[f64], alpha: f64) -> Result<GofResult, HarnessError> {
    if alpha != ALPHA {
        return Err(HarnessError::UnsupportedAlpha(alpha));
    }
    let (n, m) = (a.len(), b.len());
    if n < 100 || m < 100 {
        return Err(HarnessError::InsufficientSamples { n: n.min(m), min: 100 });
    }
    let (xa, xb) = (sorted(a), sorted(b));
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        let t = xa[i].min(xb[j]);
        while i < n && xa[i] <= t {
            i += 1;
        }
        while j < m && xb[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let threshold = KS_COEFF_001 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt();
    Ok(GofResult::new(TestKind::Ks, d, threshold, n.min(m)))
}

/// Pearson chi-square test of counts against a pmf; dof = cells - 1.
pub fn chi_square_test(
    counts: &[u64],
    pmf: &[f64],
    alpha: f64,
) -> Result<GofResult, HarnessError> {
    if counts.len() != pmf.len() {
        return Err(HarnessError::LengthMismatch {
            counts: counts.len(),
            pmf: pmf.len(),
        });
    }
    let n: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    for (cell, (&o, &p)) in counts.iter().zip(pmf).enumerate() {
        let expected = n as f64 * p;
        if expected < 5.0 {
            return Err(HarnessError::LowExpectedCount { cell, expected });
        }
        let diff = o as f64 - expected;
        statistic += diff * diff / expected;
    }
    let dof = (counts.len() - 1) as f64;
    let threshold = ChiSquared::new(dof).unwrap().inverse_cdf(1.0 - alpha);
    Ok(GofResult::new(TestKind::ChiSquare, statistic, threshold, n as usize))
}

/// Two-sample chi-square with pooled expectations; dof = cells - 1.
pub fn two_sample_chi_square_test(
    counts_a: &[u64],
    counts_b: &[u64],
    alpha: f64,
) -> Result<GofResult, HarnessError> {
    if counts_a.len() != counts_b.len() {
        return Err(HarnessError::LengthMismatch {
            counts: counts_a.len(),
            pmf: counts_b.len(),
        });
    }
    let na: u64 = counts_a.iter().sum();
    let nb: u64 = counts_b.iter().sum();
    let total = (na + nb) as f64;
    let mut statistic = 0.0;
    for (cell, (&a, &b)) in counts_a.iter().zip(counts_b).enumerate() {
        let pooled = (a + b) as f64 / total;
        let (ea, eb) = (na as f64 * pooled, nb as f64 * pooled);
        if ea < 5.0 || eb < 5.0 {
            return Err(HarnessError::LowExpectedCount {
                cell,
                expected: ea.min(eb),
            });
        }
        statistic += (a as f64 - ea).powi(2) / ea + (b as f64 - eb).powi(2) / eb;
    }
    let dof = (counts_a.len() - 1) as f64;
    let threshold = ChiSquared::new(dof).unwrap().inverse_cdf(1.0 - alpha);
    Ok(GofResult::new(
        TestKind::ChiSquare,
        statistic,
        threshold,
        (na + nb) as usize,
    ))
}
