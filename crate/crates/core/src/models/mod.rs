//! Coding problems: source/channel pairs with explicit density ratios.
//!
//! A [`Mechanism`] bundles the source law `P_X`, the channel `P_{Y|X=x}`,
//! the marginal `P_Y`, and the density ratio `r_x = dP_{Y|X=x}/dP_Y` with
//! its supremum. The marginal is always the proposal distribution of the
//! selection samplers, and the ratio supremum governs their runtime.

mod additive;
mod categorical;
mod gaussian;
mod uniform_additive;

pub use additive::AdditiveUnimodalMechanism;
pub use categorical::CategoricalMechanism;
pub use gaussian::GaussianGaussianMechanism;
pub use uniform_additive::UniformAdditiveMechanism;

use crate::stream::DeterministicStream;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input {0} is not a valid source symbol")]
    InvalidInput(f64),
    #[error("density ratio undefined at y = {0}: the marginal has no mass there")]
    UndefinedRatio(f64),
    #[error("density ratio unbounded for input {0}")]
    UnboundedRatio(f64),
}

/// A scalar source distribution, as consumed by the dithered quantisers.
pub trait SourceDistribution {
    /// `P[X <= x]`, non-decreasing in `x`.
    fn cdf(&self, x: f64) -> f64;
    /// Interval outside which each tail holds mass below 2^-64.
    fn support(&self) -> (f64, f64);
    /// Draws `X ~ P_X`.
    fn sample(&self, stream: &mut DeterministicStream) -> f64;
}

/// A joint source/channel pair with computable density ratio.
///
/// Inputs and outputs are `f64` throughout; discrete mechanisms use the
/// integers `0..m` embedded in the reals.
pub trait Mechanism: SourceDistribution {
    /// Short identifier used in reports, e.g. `uniform-additive(16)`.
    fn label(&self) -> String;

    /// Draws `Y ~ P_Y` (the marginal / proposal).
    fn marginal_sample(&self, stream: &mut DeterministicStream) -> f64;

    /// `r_x(y) = dP_{Y|X=x}/dP_Y (y)`.
    fn density_ratio(&self, x: f64, y: f64) -> Result<f64, ModelError>;

    /// Least upper bound of `r_x` over the marginal's support. At least 1.
    fn ratio_sup(&self, x: f64) -> Result<f64, ModelError>;

    /// `P[Y <= y | X = x]`.
    fn conditional_cdf(&self, x: f64, y: f64) -> f64;

    /// Exact mutual information in bits, where a closed form exists.
    fn mutual_information(&self) -> Option<f64>;

    /// `Some(m)` when the output alphabet is `{0, .., m-1}`.
    fn output_alphabet(&self) -> Option<usize> {
        None
    }
}

/// Monte Carlo estimate of `E[lb ||r_X||_inf]` over `X ~ P_X`.
///
/// Returns `(mean, standard_error)` in bits.
pub fn expected_log_ratio_sup(
    mech: &dyn Mechanism,
    stream: &mut DeterministicStream,
    n_samples: usize,
) -> Result<(f64, f64), ModelError> {
    assert!(n_samples >= 1);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let x = mech.sample(stream);
        let v = crate::math::lb(mech.ratio_sup(x)?);
        sum += v;
        sum_sq += v * v;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    let se = if n_samples > 1 { (var / (n - 1.0)).sqrt() } else { 0.0 };
    Ok((mean, se))
}

/// Resolves an `f64` carrying a symbol index in `0..m`.
pub(crate) fn symbol_index(v: f64, m: usize) -> Result<usize, ModelError> {
    let r = v.round();
    if (v - r).abs() > 1e-9 || r < 0.0 || r >= m as f64 {
        return Err(ModelError::InvalidInput(v));
    }
    Ok(r as usize)
}
