//! Statistical and information-theoretic verification.
//!
//! Distribution tests (KS, chi-square) at the fixed operating point
//! alpha = 0.01, experiments that measure the coding laws (correctness,
//! runtime, rates, ordered-uniforms identity, scale-mixture identity), and
//! CSV/table reporting. Experiments are deterministic functions of
//! `(seed, config)`.

mod experiments;
mod gof;
mod report;

pub use experiments::{
    additive_mi_quadrature, correctness_experiment, data_seed, mean_se, rate_experiment,
    runtime_experiment, smsu_experiment, theorem1_experiment, RateReport, RuntimeComparison,
    Theorem1Report,
};
pub use gof::{
    chi_square_test, ks_test, two_sample_chi_square_test, two_sample_ks_test, GofResult,
    HarnessError, TestKind, ALPHA, KS_COEFF_001,
};
pub use report::{format_table, rate_report_rows, to_csv, CsvRow, CSV_HEADER};
