//! Rate, runtime, and correctness experiments against the coding laws.
//!
//! Every experiment is a pure function of `(seed, config)`: record `i` codes
//! on substream `i` of the given seed, while source draws come from a
//! salted seed so the data stays independent of the common randomness.

use super::gof::{
    chi_square_test, ks_test, two_sample_ks_test, GofResult, HarnessError, ALPHA,
};
use crate::codec::RecordCodec;
use crate::math::lb;
use crate::models::Mechanism;
use crate::selection::{pfr_select, rejection_select, Budget};
use crate::stream::DeterministicStream;
use crate::SmsuRepresentation;
use statrs::distribution::{Beta, ContinuousCDF};

/// Salt separating source-data randomness from coding randomness.
const DATA_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn data_seed(seed: u64) -> u64 {
    seed ^ DATA_SEED_SALT
}

pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Aggregated measurements for one (mechanism, codec) cell.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub mechanism: String,
    pub codec: String,
    pub n_trials: usize,
    pub mean_payload_bits: f64,
    pub payload_se: f64,
    pub mean_steps: Option<f64>,
    pub steps_se: Option<f64>,
    pub mutual_information_bits: Option<f64>,
    pub expected_log_ratio_sup_bits: Option<f64>,
    pub expected_log_ratio_sup_se: Option<f64>,
    /// mean payload minus I(X;Y)
    pub gap_to_mi_bits: Option<f64>,
    /// mean payload minus the shape E[lb ||r||] + 2 lb(E[lb ||r||] + 1)
    pub residual_constant_bits: Option<f64>,
}

/// Round-trips `decode(encode(x))` across substreams and tests the output
/// law against `P_{Y|X=x}`: chi-square for discrete output alphabets, KS
/// against the conditional CDF otherwise.
pub fn correctness_experiment(
    codec: &RecordCodec,
    x: f64,
    seed: u64,
    n_trials: usize,
) -> Result<GofResult, HarnessError> {
    assert!(n_trials >= 10_000, "correctness runs use at least 1e4 trials");
    let mech = codec.mechanism();
    let mut outputs = Vec::with_capacity(n_trials);
    for sub in 0..n_trials as u64 {
        let bits = codec.encode(x, seed, sub)?;
        let mut cursor = crate::bits::BitCursor::new();
        let y = codec.decode(&bits, &mut cursor, seed, sub)?;
        outputs.push(y);
    }
    match mech.output_alphabet() {
        Some(m) => {
            let mut counts = vec![0u64; m];
            for &y in &outputs {
                counts[y as usize] += 1;
            }
            let pmf: Vec<f64> = (0..m)
                .map(|j| {
                    mech.conditional_cdf(x, j as f64) - mech.conditional_cdf(x, j as f64 - 1.0)
                })
                .collect();
            chi_square_test(&counts, &pmf, ALPHA)
        }
        None => ks_test(&outputs, |y| mech.conditional_cdf(x, y), ALPHA),
    }
}

/// Runtime law measurements for both selection samplers at one input.
#[derive(Debug, Clone)]
pub struct RuntimeComparison {
    pub rejection: RateReport,
    pub pfr: RateReport,
    /// Two-sample KS between the two step-count distributions.
    pub ks_between: GofResult,
}

/// Measures the step-count distribution of both samplers and compares them;
/// the two runtimes are equal in distribution and geometric with mean
/// `||r_x||_inf`.
pub fn runtime_experiment(
    mech: &dyn Mechanism,
    x: f64,
    seed: u64,
    n_trials: usize,
) -> Result<RuntimeComparison, HarnessError> {
    let budget = Budget::unlimited();
    let mut k_rej = Vec::with_capacity(n_trials);
    let mut k_pfr = Vec::with_capacity(n_trials);
    // disjoint substream ranges keep the two runs independent
    for sub in 0..n_trials as u64 {
        let mut s = DeterministicStream::new(seed, sub);
        k_rej.push(rejection_select(mech, x, &mut s, budget)?.steps_examined as f64);
        let mut s = DeterministicStream::new(seed, sub + n_trials as u64);
        k_pfr.push(pfr_select(mech, x, &mut s, budget)?.steps_examined as f64);
    }
    let ks_between = two_sample_ks_test(&k_rej, &k_pfr, ALPHA)?;
    let build = |codec: &str, ks: &[f64]| {
        let (mean, se) = mean_se(ks);
        RateReport {
            mechanism: mech.label(),
            codec: codec.to_string(),
            n_trials,
            mean_payload_bits: 0.0,
            payload_se: 0.0,
            mean_steps: Some(mean),
            steps_se: Some(se),
            mutual_information_bits: mech.mutual_information(),
            expected_log_ratio_sup_bits: None,
            expected_log_ratio_sup_se: None,
            gap_to_mi_bits: None,
            residual_constant_bits: None,
        }
    };
    Ok(RuntimeComparison {
        rejection: build("rejection", &k_rej),
        pfr: build("pfr", &k_pfr),
        ks_between,
    })
}

/// Per-coordinate checks of the ordered-uniforms identity: the `i`-th
/// normalised Poisson arrival `T_i / T_{k+1}` has the law of the `i`-th
/// order statistic of `k` uniforms, Beta(i, k+1-i).
#[derive(Debug)]
pub struct Theorem1Report {
    /// Coordinates came out ascending in every draw (they must, since the
    /// arrival times strictly increase).
    pub always_ascending: bool,
    /// KS of coordinate i against Beta(i+1, k-i), in coordinate order.
    pub marginals: Vec<GofResult>,
}

pub fn theorem1_experiment(
    seed: u64,
    k: usize,
    n_trials: usize,
) -> Result<Theorem1Report, HarnessError> {
    assert!((1..=5).contains(&k), "coordinate checks cover k in 1..=5");
    let mut coords: Vec<Vec<f64>> = vec![Vec::with_capacity(n_trials); k];
    let mut always_ascending = true;
    for sub in 0..n_trials as u64 {
        let mut s = DeterministicStream::new(seed, sub);
        let mut arrivals = Vec::with_capacity(k + 1);
        let mut t = 0.0;
        for _ in 0..=k {
            t += s.next_exponential();
            arrivals.push(t);
        }
        let last = arrivals[k];
        for i in 0..k {
            coords[i].push(arrivals[i] / last);
        }
        always_ascending &= arrivals.windows(2).all(|w| w[0] < w[1]);
    }
    let mut marginals = Vec::with_capacity(k);
    for (i, samples) in coords.iter().enumerate() {
        let beta = Beta::new((i + 1) as f64, (k - i) as f64).unwrap();
        marginals.push(ks_test(samples, |x| beta.cdf(x), ALPHA)?);
    }
    Ok(Theorem1Report {
        always_ascending,
        marginals,
    })
}

/// Encodes `n_records` i.i.d. source draws and aggregates payload bits and
/// sampler steps against the mutual-information baselines.
pub fn rate_experiment(
    codec: &RecordCodec,
    seed: u64,
    n_records: usize,
) -> Result<RateReport, HarnessError> {
    assert!(n_records >= 1_000, "rate runs use at least 1e3 records");
    let mech = codec.mechanism();
    let mut payload = Vec::with_capacity(n_records);
    let mut steps = Vec::new();
    let mut log_sups = Vec::with_capacity(n_records);
    for i in 0..n_records as u64 {
        let mut data = DeterministicStream::new(data_seed(seed), i);
        let x = mech.sample(&mut data);
        let (bits, k) = codec.encode_with_stats(x, seed, i)?;
        payload.push(bits.len() as f64);
        if let Some(k) = k {
            steps.push(k as f64);
        }
        if let Ok(sup) = mech.ratio_sup(x) {
            log_sups.push(lb(sup));
        }
    }
    let (mean_payload_bits, payload_se) = mean_se(&payload);
    let (mean_steps, steps_se) = if steps.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_se(&steps);
        (Some(m), Some(s))
    };
    let (elrs, elrs_se) = if log_sups.len() == n_records {
        let (m, s) = mean_se(&log_sups);
        (Some(m), Some(s))
    } else {
        (None, None)
    };
    let mi = mech.mutual_information();
    Ok(RateReport {
        mechanism: mech.label(),
        codec: codec.kind().name().to_string(),
        n_trials: n_records,
        mean_payload_bits,
        payload_se,
        mean_steps,
        steps_se,
        mutual_information_bits: mi,
        expected_log_ratio_sup_bits: elrs,
        expected_log_ratio_sup_se: elrs_se,
        gap_to_mi_bits: mi.map(|i| mean_payload_bits - i),
        residual_constant_bits: elrs.map(|e| mean_payload_bits - (e + 2.0 * lb(e + 1.0))),
    })
}

/// KS of the simulated `S * (U + b(S))` against the representation's target
/// noise CDF. Draw order matches the layered encoder: scale first, then
/// dither.
pub fn smsu_experiment(
    smsu: &SmsuRepresentation,
    seed: u64,
    n_trials: usize,
) -> Result<GofResult, HarnessError> {
    assert!(n_trials >= 10_000);
    let mut noise = Vec::with_capacity(n_trials);
    for sub in 0..n_trials as u64 {
        let mut s = DeterministicStream::new(seed, sub);
        let scale = smsu.sample_scale(&mut s);
        let u = s.next_uniform() - 0.5;
        noise.push(scale * (u + smsu.offset(scale)));
    }
    ks_test(&noise, |e| smsu.noise_cdf(e), ALPHA)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Quadrature estimate of I(X;Y) in bits for `Y = X + eps` given densities:
/// `h(Y) - h(eps)` with the marginal computed by nested integration. Used
/// when a mechanism reports no closed form.
pub fn additive_mi_quadrature(
    source_pdf: impl Fn(f64) -> f64,
    noise_pdf: impl Fn(f64) -> f64,
    source_range: (f64, f64),
    noise_range: (f64, f64),
    grid: usize,
) -> f64 {
    let plogp = |p: f64| if p > 0.0 { -p * lb(p) } else { 0.0 };
    let h_noise = simpson(|e| plogp(noise_pdf(e)), noise_range.0, noise_range.1, grid);
    let y_range = (source_range.0 + noise_range.0, source_range.1 + noise_range.1);
    let marginal = |y: f64| {
        simpson(
            |x| source_pdf(x) * noise_pdf(y - x),
            source_range.0,
            source_range.1,
            grid,
        )
    };
    let h_y = simpson(|y| plogp(marginal(y)), y_range.0, y_range.1, grid);
    h_y - h_noise
}
