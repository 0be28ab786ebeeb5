//! Mechanism x codec sweep with rate and wall-time measurements.

use crate::commands::build_codec;
use crate::container::MechanismSpec;
use rec_core::harness::{rate_experiment, rate_report_rows, CsvRow};
use rec_core::{BitCursor, Budget, CodecKind, DeterministicStream};
use std::time::Instant;

pub struct BenchOptions {
    pub seed: u64,
    pub trials: usize,
    /// Proposal cap for the selection codecs on the Gaussian mechanism,
    /// whose expected uncapped runtime is infinite.
    pub gaussian_budget: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 2_000,
            gaussian_budget: 1_000_000,
        }
    }
}

fn sweep_mechanisms() -> Vec<MechanismSpec> {
    vec![
        MechanismSpec::Categorical {
            source_pmf: vec![0.5, 0.5],
            channel_rows: vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        },
        MechanismSpec::UniformAdditive { levels: 4 },
        MechanismSpec::UniformAdditive { levels: 16 },
        MechanismSpec::UniformAdditive { levels: 64 },
        MechanismSpec::Gaussian { sigma: 1.0, rho: 0.5 },
    ]
}

const CODECS: [CodecKind; 4] = [CodecKind::Rejection, CodecKind::Pfr, CodecKind::Dq, CodecKind::Lq];

/// Runs the full sweep; failed cells produce an `error` row and the sweep
/// continues.
pub fn run(opts: &BenchOptions) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for spec in sweep_mechanisms() {
        let mech = spec.instantiate().expect("sweep specs are valid");
        for codec_kind in CODECS {
            let budget = match (&spec, codec_kind) {
                (MechanismSpec::Gaussian { .. }, CodecKind::Rejection | CodecKind::Pfr) => {
                    Budget::limited(opts.gaussian_budget)
                }
                _ => Budget::unlimited(),
            };
            let codec = build_codec(mech.as_ref(), &spec, codec_kind, budget);
            let label = spec.name();
            match rate_experiment(&codec, opts.seed, opts.trials) {
                Ok(report) => {
                    rows.extend(rate_report_rows(&report));
                    // wall time per record over a smaller replay
                    let timing_records = opts.trials.min(500);
                    let xs: Vec<f64> = (0..timing_records as u64)
                        .map(|i| {
                            let mut s = DeterministicStream::new(
                                rec_core::harness::data_seed(opts.seed),
                                i,
                            );
                            mech.sample(&mut s)
                        })
                        .collect();
                    let t0 = Instant::now();
                    let mut encoded = Vec::with_capacity(xs.len());
                    for (i, &x) in xs.iter().enumerate() {
                        encoded.push(codec.encode(x, opts.seed, i as u64).unwrap());
                    }
                    let encode_us = t0.elapsed().as_secs_f64() * 1e6 / xs.len() as f64;
                    let t0 = Instant::now();
                    for (i, bits) in encoded.iter().enumerate() {
                        let mut cur = BitCursor::new();
                        codec.decode(bits, &mut cur, opts.seed, i as u64).unwrap();
                    }
                    let decode_us = t0.elapsed().as_secs_f64() * 1e6 / xs.len() as f64;
                    rows.push(CsvRow::new(
                        label,
                        codec_kind.name(),
                        "encode_us_per_record",
                        encode_us,
                        None,
                        timing_records,
                    ));
                    rows.push(CsvRow::new(
                        label,
                        codec_kind.name(),
                        "decode_us_per_record",
                        decode_us,
                        None,
                        timing_records,
                    ));
                }
                Err(e) => {
                    eprintln!("bench cell {label}/{} failed: {e}", codec_kind.name());
                    rows.push(CsvRow::new(label, codec_kind.name(), "error", 1.0, None, 0));
                }
            }
        }
    }
    rows
}
