//! General one-dimensional additive mechanism `Y = X + eps`.

use super::{ModelError, SourceDistribution};
use crate::math::normal_cdf;
use crate::stream::DeterministicStream;

type CdfFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type SampleFn = Box<dyn Fn(&mut DeterministicStream) -> f64 + Send + Sync>;

/// Source plus independent unimodal additive noise, the setting served by
/// the layered quantiser. The noise is described by its CDF; the unimodality
/// requirement is the caller's obligation (it is what makes a scale-mixture
/// representation of the noise exist).
///
/// No density ratio is exposed: the marginal of `X + eps` has no closed form
/// in general, so this type is not a selection-sampler target. Mutual
/// information is likewise unavailable; the harness estimates it by
/// quadrature when densities are supplied.
pub struct AdditiveUnimodalMechanism {
    source_cdf: CdfFn,
    source_support: (f64, f64),
    source_sample: SampleFn,
    noise_cdf: CdfFn,
    source_pdf: Option<CdfFn>,
    noise_pdf: Option<CdfFn>,
}

impl AdditiveUnimodalMechanism {
    pub fn new(
        source_cdf: CdfFn,
        source_support: (f64, f64),
        source_sample: SampleFn,
        noise_cdf: CdfFn,
    ) -> Result<Self, ModelError> {
        if !(source_support.0 < source_support.1) {
            return Err(ModelError::InvalidParameter(
                "source support interval is empty".into(),
            ));
        }
        Ok(Self {
            source_cdf,
            source_support,
            source_sample,
            noise_cdf,
            source_pdf: None,
            noise_pdf: None,
        })
    }

    /// `X ~ N(0, sigma^2)` with `eps ~ N(0, rho^2)`.
    pub fn gaussian(sigma: f64, rho: f64) -> Result<Self, ModelError> {
        if !(sigma > 0.0 && sigma.is_finite()) || !(rho > 0.0 && rho.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "sigma and rho must be positive finite, got ({sigma}, {rho})"
            )));
        }
        let mut mech = Self::new(
            Box::new(move |x| normal_cdf(x / sigma)),
            (-9.6 * sigma, 9.6 * sigma),
            Box::new(move |stream| sigma * stream.next_gaussian()),
            Box::new(move |e| normal_cdf(e / rho)),
        )?;
        let norm_pdf = move |z: f64, sd: f64| {
            (-0.5 * (z / sd) * (z / sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
        };
        mech.source_pdf = Some(Box::new(move |x| norm_pdf(x, sigma)));
        mech.noise_pdf = Some(Box::new(move |e| norm_pdf(e, rho)));
        Ok(mech)
    }

    pub fn noise_cdf(&self, e: f64) -> f64 {
        (self.noise_cdf)(e)
    }

    pub fn source_pdf(&self, x: f64) -> Option<f64> {
        self.source_pdf.as_ref().map(|f| f(x))
    }

    pub fn noise_pdf(&self, e: f64) -> Option<f64> {
        self.noise_pdf.as_ref().map(|f| f(e))
    }

    /// No closed form for a general source; see the harness quadrature
    /// estimator.
    pub fn mutual_information(&self) -> Option<f64> {
        None
    }
}

impl SourceDistribution for AdditiveUnimodalMechanism {
    fn cdf(&self, x: f64) -> f64 {
        (self.source_cdf)(x)
    }

    fn support(&self) -> (f64, f64) {
        self.source_support
    }

    fn sample(&self, stream: &mut DeterministicStream) -> f64 {
        (self.source_sample)(stream)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_instance_delegates() {
        let m = AdditiveUnimodalMechanism::gaussian(1.0, 0.5).unwrap();
        assert!((m.cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((m.noise_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!(m.mutual_information().is_none());
        let mut s = DeterministicStream::new(5, 0);
        let x = m.sample(&mut s);
        assert!(x.is_finite());
    }
}
