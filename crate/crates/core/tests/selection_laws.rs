//! Statistical laws of the selection samplers and the selection code.

use rec_core::harness::{
    chi_square_test, correctness_experiment, ks_test, two_sample_chi_square_test, ALPHA,
};
use rec_core::selection::{pfr_select, rejection_select, sort_index};
use rec_core::{
    Budget, CategoricalMechanism, DeterministicStream, GaussianGaussianMechanism, Mechanism,
    RecordCodec, SelectionAlgo, UniformAdditiveMechanism,
};

#[test]
fn pfr_output_law_matches_channel_row() {
    let mech = CategoricalMechanism::binary_asymmetric();
    let mut counts = [0u64; 2];
    for sub in 0..100_000u64 {
        let mut s = DeterministicStream::new(7, sub);
        let out = pfr_select(&mech, 0.0, &mut s, Budget::unlimited()).unwrap();
        counts[out.sample as usize] += 1;
    }
    let r = chi_square_test(&counts, &[0.8, 0.2], ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn pfr_index_distributed_as_argmin_rank_oracle() {
    // independent oracle for the selected-index law: on a long prefix of
    // raw proposal/uniform pairs, the sampler's index is the ascending-
    // uniform rank of the point minimising u / r(y). Compare that rank's
    // law against pfr_select on independent randomness.
    let mech = CategoricalMechanism::binary_asymmetric();
    let n = 10_000u64;
    let cells = 8usize; // indices 1..7 and >= 8 pooled
    let mut oracle_counts = vec![0u64; cells];
    let mut pfr_counts = vec![0u64; cells];
    let prefix = 512usize; // tail mass beyond this is ~0.625^512
    for sub in 0..n {
        let mut s = DeterministicStream::new(101, sub);
        let mut us = Vec::with_capacity(prefix);
        let mut best = (0usize, f64::INFINITY);
        for j in 0..prefix {
            let y = mech.marginal_sample(&mut s);
            let u = s.next_uniform();
            us.push(u);
            let score = u / mech.density_ratio(0.0, y).unwrap();
            if score < best.1 {
                best = (j, score);
            }
        }
        let rank = sort_index(&us, best.0 + 1, prefix).unwrap() as usize;
        oracle_counts[(rank - 1).min(cells - 1)] += 1;

        let mut s = DeterministicStream::new(202, sub);
        let out = pfr_select(&mech, 0.0, &mut s, Budget::unlimited()).unwrap();
        pfr_counts[(out.selected_index as usize - 1).min(cells - 1)] += 1;
    }
    // drop sparse tail cells the pooled test cannot support
    let keep: Vec<usize> = (0..cells)
        .filter(|&i| oracle_counts[i] + pfr_counts[i] >= 20)
        .collect();
    let a: Vec<u64> = keep.iter().map(|&i| oracle_counts[i]).collect();
    let b: Vec<u64> = keep.iter().map(|&i| pfr_counts[i]).collect();
    let r = two_sample_chi_square_test(&a, &b, ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn decode_exactness_continuous_mechanism() {
    // uniform-additive output is continuous: KS against the conditional CDF
    let mech = UniformAdditiveMechanism::new(16).unwrap();
    let codec = RecordCodec::selection(&mech, SelectionAlgo::Rejection, Budget::unlimited());
    let r = correctness_experiment(&codec, 3.0, 55, 10_000).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn decode_exactness_gaussian_with_budget() {
    let mech = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
    let codec =
        RecordCodec::selection(&mech, SelectionAlgo::Pfr, Budget::limited(1_000_000));
    let mut outputs = Vec::with_capacity(10_000);
    for sub in 0..10_000u64 {
        let bits = codec.encode(0.7, 66, sub).unwrap();
        let mut cur = rec_core::BitCursor::new();
        outputs.push(codec.decode(&bits, &mut cur, 66, sub).unwrap());
    }
    let r = ks_test(&outputs, |y| mech.conditional_cdf(0.7, y), ALPHA).unwrap();
    assert!(r.pass, "stat={} thr={}", r.statistic, r.threshold);
}

#[test]
fn runtime_grows_exponentially_in_information() {
    // mean K tracks 2^{E[lb ||r_X||_inf]} = L for the uniform-additive family
    let mut means = Vec::new();
    for levels in [2u64, 4, 16] {
        let mech = UniformAdditiveMechanism::new(levels).unwrap();
        let n = 4_000u64;
        let mut total = 0u64;
        for sub in 0..n {
            let mut s = DeterministicStream::new(77, sub);
            total += rejection_select(&mech, 0.0, &mut s, Budget::unlimited())
                .unwrap()
                .steps_examined;
        }
        means.push(total as f64 / n as f64);
    }
    for (mean, levels) in means.iter().zip([2.0f64, 4.0, 16.0]) {
        assert!(*mean >= levels * 0.9, "mean {mean} for L={levels}");
        assert!(*mean <= levels * 1.1, "mean {mean} for L={levels}");
    }
    assert!(means[2] / means[0] > 4.0, "cost must grow with information");
}

#[test]
fn order_contract_on_every_run() {
    let mech = CategoricalMechanism::binary_asymmetric();
    for sub in 0..2_000u64 {
        let mut s = DeterministicStream::new(88, sub);
        let out = pfr_select(&mech, 1.0, &mut s, Budget::unlimited()).unwrap();
        assert!(1 <= out.selected_index && out.selected_index <= out.steps_examined);
        let mut s = DeterministicStream::new(88, sub);
        let out = rejection_select(&mech, 1.0, &mut s, Budget::unlimited()).unwrap();
        assert_eq!(out.selected_index, out.steps_examined);
    }
}

#[test]
fn mean_codeword_length_stays_near_bound_shape() {
    let mech = CategoricalMechanism::binary_asymmetric();
    let codec = RecordCodec::selection(&mech, SelectionAlgo::Pfr, Budget::unlimited());
    let n = 10_000u64;
    let mut bits_total = 0usize;
    for sub in 0..n {
        bits_total += codec.encode(0.0, 31, sub).unwrap().len();
    }
    let mean = bits_total as f64 / n as f64;
    let elg = 1.6f64.log2();
    let bound = elg + 2.0 * (elg + 1.0).log2() + 6.0;
    assert!(mean <= bound, "mean={mean} bound={bound}");
}
