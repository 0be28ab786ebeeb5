//! Gaussian source with additive Gaussian channel noise.

use super::{Mechanism, ModelError, SourceDistribution};
use crate::math::{exp, lb, normal_cdf};
use crate::stream::DeterministicStream;

/// `P_X = N(0, sigma^2)`, `P_{Y|X=x} = N(x, rho^2)`, marginal
/// `P_Y = N(0, sigma^2 + rho^2)`.
///
/// The log density ratio is a quadratic in `y` with negative leading
/// coefficient, so the ratio supremum has the closed form
/// `sqrt((sigma^2+rho^2)/rho^2) * exp(x^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianGaussianMechanism {
    sigma: f64,
    rho: f64,
    tau: f64, // marginal standard deviation
}

/// Standard normal tail beyond 9.6 sigma is under 2^-64.
const GAUSSIAN_SUPPORT_SIGMAS: f64 = 9.6;

impl GaussianGaussianMechanism {
    pub fn new(sigma: f64, rho: f64) -> Result<Self, ModelError> {
        if !(sigma > 0.0 && sigma.is_finite()) || !(rho > 0.0 && rho.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "sigma and rho must be positive finite, got ({sigma}, {rho})"
            )));
        }
        Ok(Self {
            sigma,
            rho,
            tau: (sigma * sigma + rho * rho).sqrt(),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl SourceDistribution for GaussianGaussianMechanism {
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x / self.sigma)
    }

    fn support(&self) -> (f64, f64) {
        let w = GAUSSIAN_SUPPORT_SIGMAS * self.sigma;
        (-w, w)
    }

    fn sample(&self, stream: &mut DeterministicStream) -> f64 {
        self.sigma * stream.next_gaussian()
    }
}

impl Mechanism for GaussianGaussianMechanism {
    fn label(&self) -> String {
        format!("gaussian({},{})", self.sigma, self.rho)
    }

    fn marginal_sample(&self, stream: &mut DeterministicStream) -> f64 {
        self.tau * stream.next_gaussian()
    }

    fn density_ratio(&self, x: f64, y: f64) -> Result<f64, ModelError> {
        let d = (y - x) / self.rho;
        let m = y / self.tau;
        Ok((self.tau / self.rho) * exp(0.5 * (m * m - d * d)))
    }

    fn ratio_sup(&self, x: f64) -> Result<f64, ModelError> {
        let z = x / self.sigma;
        Ok((self.tau / self.rho) * exp(0.5 * z * z))
    }

    fn conditional_cdf(&self, x: f64, y: f64) -> f64 {
        normal_cdf((y - x) / self.rho)
    }

    fn mutual_information(&self) -> Option<f64> {
        Some(0.5 * lb(1.0 + (self.sigma / self.rho).powi(2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_at_origin() {
        let m = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
        // conditional N(0, 0.25) vs marginal N(0, 1.25) at y = 0: sqrt(5)
        assert!((m.density_ratio(0.0, 0.0).unwrap() - 5.0f64.sqrt()).abs() < 1e-12);
        assert!((m.ratio_sup(0.0).unwrap() - 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ratio_matches_explicit_densities() {
        let m = GaussianGaussianMechanism::new(1.3, 0.7).unwrap();
        let tau = (1.3f64 * 1.3 + 0.7 * 0.7).sqrt();
        let pdf = |z: f64, sd: f64| (-0.5 * (z / sd) * (z / sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
        for (x, y) in [(0.0, 0.3), (1.0, 0.7), (-2.0, -1.4), (0.5, 2.0)] {
            let expect = pdf(y - x, 0.7) / pdf(y, tau);
            let got = m.density_ratio(x, y).unwrap();
            assert!((got / expect - 1.0).abs() < 1e-12, "x={x} y={y}");
        }
    }

    #[test]
    fn sup_matches_grid_search() {
        let m = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
        for &x in &[0.0, 0.4, -1.0, 2.5] {
            let sup = m.ratio_sup(x).unwrap();
            let mut grid_max = 0.0f64;
            // maximiser sits at x * tau^2 / sigma^2; scan a wide window around it
            for i in 0..200_001 {
                let y = -10.0 + 20.0 * (i as f64) / 200_000.0 + x;
                grid_max = grid_max.max(m.density_ratio(x, y).unwrap());
            }
            assert!(grid_max <= sup * (1.0 + 1e-9), "x={x}");
            assert!((grid_max - sup).abs() / sup < 1e-6, "x={x}: {grid_max} vs {sup}");
        }
    }

    #[test]
    fn mutual_information_closed_form() {
        let m = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
        assert!((m.mutual_information().unwrap() - 0.5 * 5.0f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn normalisation_by_quadrature() {
        // integral of r_x(y) dP_Y(y) over a wide grid equals 1
        let m = GaussianGaussianMechanism::new(1.0, 0.5).unwrap();
        let tau = 1.25f64.sqrt();
        let marginal_pdf = |y: f64| {
            (-0.5 * (y / tau) * (y / tau)).exp() / (tau * (2.0 * std::f64::consts::PI).sqrt())
        };
        for &x in &[0.0, 1.0, -0.7, 2.0] {
            let (a, b) = (x - 12.0, x + 12.0);
            let n = 40_000;
            let h = (b - a) / n as f64;
            let f = |y: f64| m.density_ratio(x, y).unwrap() * marginal_pdf(y);
            let mut s = f(a) + f(b);
            for i in 1..n {
                s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let integral = s * h / 3.0;
            assert!((integral - 1.0).abs() < 1e-6, "x={x}: {integral}");
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(GaussianGaussianMechanism::new(0.0, 1.0).is_err());
        assert!(GaussianGaussianMechanism::new(1.0, -1.0).is_err());
    }
}
