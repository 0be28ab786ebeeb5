//! The verification suite: every distributional and codelength claim the
//! library makes, runnable as named suites with one pass/fail line each.
//!
//! The same checks back the `verify` subcommand and the acceptance test
//! target. Each check is deterministic in `(seed, config)`.

use crate::commands::encode_records;
use crate::container::MechanismSpec;
use rec_core::bits::{elias_delta_decode, elias_delta_encode, BitCursor};
use rec_core::dither::{dq_decode, dq_encode, gaussian_smsu, lq_decode, lq_encode};
use rec_core::harness::{
    correctness_experiment, data_seed, ks_test, rate_experiment, runtime_experiment,
    smsu_experiment, theorem1_experiment, ALPHA,
};
use rec_core::math::{lb, normal_cdf, normal_quantile};
use rec_core::models::expected_log_ratio_sup;
use rec_core::{
    Budget, CategoricalMechanism, CodecKind, DeterministicStream, GaussianGaussianMechanism,
    Mechanism, RecordCodec, SelectionAlgo, SmsuRepresentation, SourceDistribution,
    UniformAdditiveMechanism,
};

/// Deliberate defect injected into the randomness suite, proving the
/// statistical checks have the power to catch a biased generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    BiasedUniform,
}

impl Fault {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "biased-uniform" => Some(Fault::BiasedUniform),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: usize,
}

impl CheckResult {
    fn stat(suite: &'static str, check: impl Into<String>, value: f64, threshold: f64, n: usize) -> Self {
        Self {
            suite,
            check: check.into(),
            value,
            threshold,
            pass: value < threshold,
            n,
        }
    }

    fn interval(
        suite: &'static str,
        check: impl Into<String>,
        value: f64,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> Self {
        Self {
            suite,
            check: check.into(),
            value,
            threshold: hi,
            pass: (lo..=hi).contains(&value),
            n,
        }
    }
}

pub const SUITES: &[&str] = &[
    "randomness",
    "channel-simulation",
    "runtime",
    "ordered-uniforms",
    "dither-identity",
    "dq-rate",
    "smsu",
    "layered",
    "log-sup",
    "elias",
    "selection-rate",
    "determinism",
];

pub struct VerifyOptions {
    pub seed: u64,
    /// Substring filter over suite names; `None` runs everything.
    pub suite: Option<String>,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            suite: None,
            fault: None,
        }
    }
}

pub fn run(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &suite in SUITES {
        if let Some(filter) = &opts.suite {
            if !suite.contains(filter.as_str()) {
                continue;
            }
        }
        out.extend(run_suite(suite, opts.seed, opts.fault));
    }
    out
}

pub fn run_suite(name: &str, seed: u64, fault: Option<Fault>) -> Vec<CheckResult> {
    match name {
        "randomness" => randomness_suite(seed, fault),
        "channel-simulation" => channel_simulation_suite(seed),
        "runtime" => runtime_suite(seed),
        "ordered-uniforms" => ordered_uniforms_suite(seed),
        "dither-identity" => dither_identity_suite(seed),
        "dq-rate" => dq_rate_suite(seed),
        "smsu" => smsu_suite(seed),
        "layered" => layered_suite(seed),
        "log-sup" => log_sup_suite(seed),
        "elias" => elias_suite(seed),
        "selection-rate" => selection_rate_suite(seed),
        "determinism" => determinism_suite(seed),
        other => panic!("unknown suite {other}"),
    }
}

fn binary_mech() -> CategoricalMechanism {
    CategoricalMechanism::binary_asymmetric()
}

fn draw_uniform(s: &mut DeterministicStream, fault: Option<Fault>) -> f64 {
    let u = s.next_uniform();
    match fault {
        Some(Fault::BiasedUniform) => u.powf(1.05),
        None => u,
    }
}

fn randomness_suite(seed: u64, fault: Option<Fault>) -> Vec<CheckResult> {
    const SUITE: &str = "randomness";
    let n = 100_000usize;
    let mut checks = Vec::new();

    let mut s = DeterministicStream::new(seed, 0);
    let uniforms: Vec<f64> = (0..n).map(|_| draw_uniform(&mut s, fault)).collect();
    let r = ks_test(&uniforms, |x| x.clamp(0.0, 1.0), ALPHA).unwrap();
    checks.push(CheckResult::stat(SUITE, "uniform KS vs Unif(0,1)", r.statistic, r.threshold, n));

    let mean = uniforms.iter().sum::<f64>() / n as f64;
    checks.push(CheckResult::stat(SUITE, "uniform mean within CLT window of 0.5", (mean - 0.5).abs(), 0.003, n));

    let mut s = DeterministicStream::new(seed, 1);
    let gaussians: Vec<f64> = (0..n)
        .map(|_| normal_quantile(draw_uniform(&mut s, fault)))
        .collect();
    let r = ks_test(&gaussians, normal_cdf, ALPHA).unwrap();
    checks.push(CheckResult::stat(SUITE, "gaussian KS vs standard normal", r.statistic, r.threshold, n));

    let mut s = DeterministicStream::new(seed, 2);
    let expo_mean = (0..n)
        .map(|_| -(1.0 - draw_uniform(&mut s, fault)).ln())
        .sum::<f64>()
        / n as f64;
    checks.push(CheckResult::stat(SUITE, "exponential mean within CLT window of 1", (expo_mean - 1.0).abs(), 0.01, n));

    let mut a = DeterministicStream::new(seed, 3);
    let mut b = DeterministicStream::new(seed, 4);
    let xa: Vec<f64> = (0..10_000).map(|_| a.next_uniform()).collect();
    let xb: Vec<f64> = (0..10_000).map(|_| b.next_uniform()).collect();
    let r = rec_core::harness::two_sample_ks_test(&xa, &xb, ALPHA).unwrap();
    checks.push(CheckResult::stat(SUITE, "substream independence two-sample KS", r.statistic, r.threshold, 10_000));

    checks
}

fn channel_simulation_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "channel-simulation";
    let mech = binary_mech();
    let n = 100_000;
    let mut checks = Vec::new();
    for (algo, name) in [
        (SelectionAlgo::Rejection, "rejection"),
        (SelectionAlgo::Pfr, "pfr"),
    ] {
        let codec = RecordCodec::selection(&mech, algo, Budget::unlimited());
        let r = correctness_experiment(&codec, 0.0, seed, n).unwrap();
        checks.push(CheckResult::stat(
            SUITE,
            format!("{name} decode(encode) chi-square vs (0.8, 0.2) at x=0"),
            r.statistic,
            r.threshold,
            n,
        ));
    }
    checks
}

fn runtime_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "runtime";
    let mut checks = Vec::new();

    let mech = binary_mech();
    let r = runtime_experiment(&mech, 0.0, seed, 100_000).unwrap();
    for (rep, name) in [(&r.rejection, "rejection"), (&r.pfr, "pfr")] {
        let (mean, se) = (rep.mean_steps.unwrap(), rep.steps_se.unwrap());
        checks.push(CheckResult::stat(
            SUITE,
            format!("categorical {name} mean K within 3 SE of 1.6 (mean {mean:.4})"),
            (mean - 1.6).abs(),
            3.0 * se,
            rep.n_trials,
        ));
    }
    checks.push(CheckResult::stat(
        SUITE,
        "categorical rejection-K vs pfr-K two-sample KS",
        r.ks_between.statistic,
        r.ks_between.threshold,
        r.ks_between.n,
    ));

    let mech = UniformAdditiveMechanism::new(16).unwrap();
    let r = runtime_experiment(&mech, 3.0, seed, 20_000).unwrap();
    for (rep, name) in [(&r.rejection, "rejection"), (&r.pfr, "pfr")] {
        let (mean, se) = (rep.mean_steps.unwrap(), rep.steps_se.unwrap());
        checks.push(CheckResult::stat(
            SUITE,
            format!("uniform-additive(16) {name} mean K within 3 SE of 16 (mean {mean:.3})"),
            (mean - 16.0).abs(),
            3.0 * se,
            rep.n_trials,
        ));
    }
    checks.push(CheckResult::stat(
        SUITE,
        "uniform-additive(16) rejection-K vs pfr-K two-sample KS",
        r.ks_between.statistic,
        r.ks_between.threshold,
        r.ks_between.n,
    ));
    checks
}

fn ordered_uniforms_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "ordered-uniforms";
    let mut checks = Vec::new();
    for k in [2usize, 3] {
        let report = theorem1_experiment(seed, k, 10_000).unwrap();
        checks.push(CheckResult::stat(
            SUITE,
            format!("k={k}: coordinates ascending in every draw"),
            if report.always_ascending { 0.0 } else { 1.0 },
            0.5,
            10_000,
        ));
        for (i, g) in report.marginals.iter().enumerate() {
            checks.push(CheckResult::stat(
                SUITE,
                format!("k={k}: T_{}/T_{} KS vs Beta({}, {})", i + 1, k + 1, i + 1, k - i),
                g.statistic,
                g.threshold,
                g.n,
            ));
        }
    }
    checks
}

fn dither_identity_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "dither-identity";
    let source = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
    let x = 0.3;
    let n = 100_000;
    let mut errors = Vec::with_capacity(n);
    let mut violations = 0u64;
    for sub in 0..n as u64 {
        let bits = dq_encode(&source, x, seed, sub).unwrap();
        let mut cur = BitCursor::new();
        let y = dq_decode(&source, &bits, &mut cur, seed, sub).unwrap();
        let e = y - x;
        if !(e > -0.5 && e <= 0.5) {
            violations += 1;
        }
        errors.push(e);
    }
    let r = ks_test(&errors, |e| (e + 0.5).clamp(0.0, 1.0), ALPHA).unwrap();
    vec![
        CheckResult::stat(
            SUITE,
            "reconstruction error inside (-1/2, 1/2] on every record",
            violations as f64,
            0.5,
            n,
        ),
        CheckResult::stat(SUITE, "reconstruction error KS vs Unif(-1/2, 1/2]", r.statistic, r.threshold, n),
    ]
}

fn dq_rate_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "dq-rate";
    let mut checks = Vec::new();
    let mut rates = Vec::new();
    for levels in [4u64, 16, 64] {
        let mech = UniformAdditiveMechanism::new(levels).unwrap();
        let codec = RecordCodec::dithered(&mech);
        let report = rate_experiment(&codec, seed, 10_000).unwrap();
        let mi = report.mutual_information_bits.unwrap();
        let gap = report.mean_payload_bits - mi;
        checks.push(CheckResult::interval(
            SUITE,
            format!(
                "L={levels}: mean payload {:.3} within [I, I+3] = [{mi}, {}]",
                report.mean_payload_bits,
                mi + 3.0
            ),
            gap,
            0.0,
            3.0,
            report.n_trials,
        ));
        rates.push(report.mean_payload_bits);
    }
    for (i, (lo, hi)) in [(4u64, 16u64), (16, 64)].into_iter().enumerate() {
        let step = rates[i + 1] - rates[i];
        checks.push(CheckResult::stat(
            SUITE,
            format!("rate step L={lo} to L={hi} within 2.0 +- 0.2 (step {step:.3})"),
            (step - 2.0).abs(),
            0.2,
            10_000,
        ));
    }
    checks
}

fn smsu_suite(seed: u64) -> Vec<CheckResult> {
    let r = smsu_experiment(&gaussian_smsu(), seed, 100_000).unwrap();
    vec![CheckResult::stat(
        "smsu",
        "S * U KS vs standard normal (S = 2 chi(3))",
        r.statistic,
        r.threshold,
        r.n,
    )]
}

fn layered_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "layered";
    let mech = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
    let mi = mech.mutual_information().unwrap();
    let mut checks = Vec::new();

    let smsu = SmsuRepresentation::gaussian(0.5);
    let n = 100_000;
    let mut errors = Vec::with_capacity(n);
    for sub in 0..n as u64 {
        let mut data = DeterministicStream::new(data_seed(seed), sub);
        let x = mech.sample(&mut data);
        let bits = lq_encode(&mech, &smsu, x, seed, sub).unwrap();
        let mut cur = BitCursor::new();
        let y = lq_decode(&mech, &smsu, &bits, &mut cur, seed, sub).unwrap();
        errors.push(y - x);
    }
    let r = ks_test(&errors, |e| normal_cdf(e / 0.5), ALPHA).unwrap();
    checks.push(CheckResult::stat(
        SUITE,
        "decode minus input KS vs N(0, 0.25)",
        r.statistic,
        r.threshold,
        n,
    ));

    let codec = RecordCodec::layered(&mech, SmsuRepresentation::gaussian(0.5));
    let report = rate_experiment(&codec, seed, 10_000).unwrap();
    let bound = mi + lb(mi + 1.0) + 8.0;
    checks.push(CheckResult::stat(
        SUITE,
        format!(
            "mean payload {:.3} <= I + lb(I+1) + 8 = {bound:.3} (measured gap to I: {:.3} bits)",
            report.mean_payload_bits,
            report.mean_payload_bits - mi
        ),
        report.mean_payload_bits,
        bound,
        report.n_trials,
    ));
    checks
}

fn log_sup_suite(seed: u64) -> Vec<CheckResult> {
    let mech = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
    let mut stream = DeterministicStream::new(data_seed(seed), 0);
    let n = 100_000;
    let (mean, se) = expected_log_ratio_sup(&mech, &mut stream, n).unwrap();
    let target = mech.mutual_information().unwrap() + 0.5 * lb(std::f64::consts::E);
    vec![CheckResult::stat(
        "log-sup",
        format!("E[lb ||r_X||] = {mean:.4} within 3 SE of I + lb(e)/2 = {target:.4}"),
        (mean - target).abs(),
        3.0 * se,
        n,
    )]
}

fn elias_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "elias";
    let mut roundtrip_failures = 0u64;
    let mut bound_failures = 0u64;
    for k in 1..=1_000_000u64 {
        let bits = elias_delta_encode(k).unwrap();
        let mut cur = BitCursor::new();
        if elias_delta_decode(&bits, &mut cur).unwrap() != k || cur.position() != bits.len() {
            roundtrip_failures += 1;
        }
        let lbk = (k as f64).log2();
        if bits.len() as f64 > lbk + 2.0 * (1.0 + lbk).log2() + 1.0 + 1e-9 {
            bound_failures += 1;
        }
    }
    let mut prefix_failures = 0u64;
    let mut s = DeterministicStream::new(seed, 0);
    let mut pairs = 0;
    while pairs < 10_000 {
        let a = (s.next_uniform() * 1e6) as u64 + 1;
        let b = (s.next_uniform() * 1e6) as u64 + 1;
        if a == b {
            continue;
        }
        pairs += 1;
        let ca = elias_delta_encode(a).unwrap();
        let cb = elias_delta_encode(b).unwrap();
        let (short, long) = if ca.len() <= cb.len() { (&ca, &cb) } else { (&cb, &ca) };
        if (0..short.len()).all(|i| short.get(i) == long.get(i)) {
            prefix_failures += 1;
        }
    }
    vec![
        CheckResult::stat(SUITE, "delta roundtrip failures over k in 1..=1e6", roundtrip_failures as f64, 0.5, 1_000_000),
        CheckResult::stat(SUITE, "delta length-bound violations over k in 1..=1e6", bound_failures as f64, 0.5, 1_000_000),
        CheckResult::stat(SUITE, "prefix violations over 1e4 random pairs", prefix_failures as f64, 0.5, 10_000),
    ]
}

fn selection_rate_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "selection-rate";
    let mut checks = Vec::new();
    let mechs: Vec<(Box<dyn Mechanism + Send + Sync>, &str)> = vec![
        (Box::new(binary_mech()), "categorical(2x2)"),
        (Box::new(UniformAdditiveMechanism::new(4).unwrap()), "uniform-additive(4)"),
        (Box::new(UniformAdditiveMechanism::new(16).unwrap()), "uniform-additive(16)"),
    ];
    for (mech, name) in &mechs {
        let codec = RecordCodec::selection(mech.as_ref(), SelectionAlgo::Pfr, Budget::unlimited());
        let report = rate_experiment(&codec, seed, 10_000).unwrap();
        let elg = report.expected_log_ratio_sup_bits.unwrap();
        let bound = elg + 2.0 * lb(elg + 1.0) + 6.0;
        checks.push(CheckResult::stat(
            SUITE,
            format!(
                "{name}: pfr mean payload {:.3} <= E[lb||r||] + 2 lb(E+1) + 6 = {bound:.3} (residual {:+.3})",
                report.mean_payload_bits,
                report.residual_constant_bits.unwrap()
            ),
            report.mean_payload_bits,
            bound,
            report.n_trials,
        ));
    }
    checks
}

fn determinism_suite(seed: u64) -> Vec<CheckResult> {
    const SUITE: &str = "determinism";
    let mut checks = Vec::new();
    let spec = MechanismSpec::UniformAdditive { levels: 16 };
    let mech = spec.instantiate().unwrap();
    let n_records = 200usize;
    let records: Vec<f64> = (0..n_records as u64)
        .map(|i| {
            let mut s = DeterministicStream::new(data_seed(seed), i);
            mech.sample(&mut s)
        })
        .collect();

    for codec in [CodecKind::Dq, CodecKind::Pfr] {
        let a = encode_records(&spec, codec, seed, Budget::unlimited(), &records).unwrap();
        let b = encode_records(&spec, codec, seed, Budget::unlimited(), &records).unwrap();
        let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len());
        checks.push(CheckResult::stat(
            SUITE,
            format!("{} encode twice: differing bytes", codec.name()),
            diff as f64,
            0.5,
            n_records,
        ));
        let d1 = crate::commands::decode_records(&a).unwrap();
        let d2 = crate::commands::decode_records(&a).unwrap();
        let diff = d1.iter().zip(&d2).filter(|(x, y)| x != y).count();
        checks.push(CheckResult::stat(
            SUITE,
            format!("{} decode twice: differing records", codec.name()),
            diff as f64,
            0.5,
            n_records,
        ));
    }

    // substream isolation: flip a payload bit inside one dq record; the
    // fixed-length dq codewords keep later records aligned, and per-record
    // substreams keep their randomness untouched
    let bytes = encode_records(&spec, CodecKind::Dq, seed, Budget::unlimited(), &records).unwrap();
    let baseline = crate::commands::decode_records(&bytes).unwrap();
    let (header, payload) = crate::container::read_container(&mut &bytes[..]).unwrap();
    let header_len = bytes.len() - payload.as_padded_bytes().len();
    let corrupt_record = 57usize;
    let bits_per_record = header.payload_bits as usize / n_records;
    let bit_index = corrupt_record * bits_per_record + 2;
    let mut corrupted = bytes.clone();
    corrupted[header_len + bit_index / 8] ^= 0x80 >> (bit_index % 8);
    let decoded = crate::commands::decode_records(&corrupted).unwrap();
    let later_mismatches = decoded
        .iter()
        .enumerate()
        .filter(|(i, y)| *i != corrupt_record && **y != baseline[*i])
        .count();
    checks.push(CheckResult::stat(
        SUITE,
        format!("corrupt one dq record: other {} records unchanged", n_records - 1),
        later_mismatches as f64,
        0.5,
        n_records,
    ));
    checks.push(CheckResult::stat(
        SUITE,
        "corrupt one dq record: decode still yields full record count",
        (decoded.len() != n_records) as u64 as f64,
        0.5,
        n_records,
    ));
    checks
}
