//! Acceptance suite: every verification criterion at its stated tolerance,
//! one test per criterion, printing one pass/fail line per check.
//!
//! Run with `cargo test -p rec-cli --test acceptance -- --nocapture` to see
//! the per-check lines; the per-test ok/FAILED lines summarise the same
//! outcomes either way.

use rec_cli::verify::run_suite;

const SEED: u64 = 42;

fn assert_suite(suite: &'static str) {
    let checks = run_suite(suite, SEED, None);
    assert!(!checks.is_empty());
    let mut failed = Vec::new();
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {suite}: {} (value {:.6}, threshold {:.6}, n={})",
            c.check, c.value, c.threshold, c.n
        );
        if !c.pass {
            failed.push(c.check.clone());
        }
    }
    assert!(failed.is_empty(), "{suite} failed: {failed:?}");
}

#[test]
fn acceptance_01_exact_channel_simulation() {
    assert_suite("channel-simulation");
}

#[test]
fn acceptance_02_geometric_runtime_law() {
    assert_suite("runtime");
}

#[test]
fn acceptance_03_ordered_uniforms_identity() {
    assert_suite("ordered-uniforms");
}

#[test]
fn acceptance_04_dithering_identity() {
    assert_suite("dither-identity");
}

#[test]
fn acceptance_05_dithered_quantiser_rate() {
    assert_suite("dq-rate");
}

#[test]
fn acceptance_06_smsu_identity() {
    assert_suite("smsu");
}

#[test]
fn acceptance_07_layered_quantiser_correctness_and_rate() {
    assert_suite("layered");
}

#[test]
fn acceptance_08_gaussian_log_sup_identity() {
    assert_suite("log-sup");
}

#[test]
fn acceptance_09_elias_delta() {
    assert_suite("elias");
}

#[test]
fn acceptance_10_selection_code_rate_shape() {
    assert_suite("selection-rate");
}

#[test]
fn acceptance_11_determinism_and_isolation() {
    assert_suite("determinism");
}
