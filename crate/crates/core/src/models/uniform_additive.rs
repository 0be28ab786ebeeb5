//! Equiprobable integer levels with additive uniform noise.

use super::{symbol_index, Mechanism, ModelError, SourceDistribution};
use crate::math::lb;
use crate::stream::DeterministicStream;

/// `X` uniform on `{0, .., L-1}`, `Y = X + U` with `U ~ Unif(-1/2, 1/2)`.
///
/// Conditional densities have unit-length supports that are disjoint up to
/// boundaries, so `I(X;Y) = lb L` exactly and `||r_x||_inf = L` for every x.
#[derive(Debug, Clone, Copy)]
pub struct UniformAdditiveMechanism {
    levels: u64,
}

impl UniformAdditiveMechanism {
    pub fn new(levels: u64) -> Result<Self, ModelError> {
        if levels == 0 {
            return Err(ModelError::InvalidParameter(
                "at least one source level required".into(),
            ));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> u64 {
        self.levels
    }

    fn level_count(&self) -> f64 {
        self.levels as f64
    }
}

impl SourceDistribution for UniformAdditiveMechanism {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        ((x.floor() + 1.0) / self.level_count()).min(1.0)
    }

    fn support(&self) -> (f64, f64) {
        (-1.0, self.level_count())
    }

    fn sample(&self, stream: &mut DeterministicStream) -> f64 {
        let u = stream.next_uniform();
        (u * self.level_count()).floor().min(self.level_count() - 1.0)
    }
}

impl Mechanism for UniformAdditiveMechanism {
    fn label(&self) -> String {
        format!("uniform-additive({})", self.levels)
    }

    fn marginal_sample(&self, stream: &mut DeterministicStream) -> f64 {
        let level = self.sample(stream);
        level + (stream.next_uniform() - 0.5)
    }

    fn density_ratio(&self, x: f64, y: f64) -> Result<f64, ModelError> {
        let xi = symbol_index(x, self.levels as usize)? as f64;
        if y <= -0.5 || y >= self.level_count() - 0.5 {
            return Err(ModelError::UndefinedRatio(y));
        }
        // y belongs to level round-half-up(y); conditional density is 1 on
        // that unit cell and 0 elsewhere, marginal is 1/L throughout.
        if (y + 0.5).floor() == xi {
            Ok(self.level_count())
        } else {
            Ok(0.0)
        }
    }

    fn ratio_sup(&self, x: f64) -> Result<f64, ModelError> {
        symbol_index(x, self.levels as usize)?;
        Ok(self.level_count())
    }

    fn conditional_cdf(&self, x: f64, y: f64) -> f64 {
        (y - x + 0.5).clamp(0.0, 1.0)
    }

    fn mutual_information(&self) -> Option<f64> {
        Some(lb(self.level_count()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_sup_is_level_count() {
        let m = UniformAdditiveMechanism::new(16).unwrap();
        for x in 0..16 {
            assert_eq!(m.ratio_sup(x as f64).unwrap(), 16.0);
        }
    }

    #[test]
    fn ratio_indicator_geometry() {
        let m = UniformAdditiveMechanism::new(16).unwrap();
        assert_eq!(m.density_ratio(3.0, 3.2).unwrap(), 16.0);
        assert_eq!(m.density_ratio(3.0, 3.6).unwrap(), 0.0);
        assert_eq!(m.density_ratio(3.0, 2.4).unwrap(), 0.0);
        assert!(m.density_ratio(3.0, -0.7).is_err());
        assert!(m.density_ratio(3.0, 15.6).is_err());
    }

    #[test]
    fn mutual_information_exact() {
        assert_eq!(
            UniformAdditiveMechanism::new(16).unwrap().mutual_information(),
            Some(4.0)
        );
        // quadrature oracle: I = -integral m(y) lb m(y) dy with m = 1/L on
        // a length-L support, minus h(Y|X) = 0
        let l = 16.0f64;
        let n = 100_000;
        let h = l / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let _y = -0.5 + (i as f64 + 0.5) * h;
            acc += -(1.0 / l) * (1.0 / l).log2() * h;
        }
        assert!((acc - 4.0).abs() < 1e-9);
    }

    #[test]
    fn normalisation_under_marginal() {
        let m = UniformAdditiveMechanism::new(4).unwrap();
        // integral of ratio * marginal density over the support, midpoint rule
        for x in 0..4 {
            let n = 400_000;
            let h = 4.0 / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let y = -0.5 + (i as f64 + 0.5) * h;
                acc += m.density_ratio(x as f64, y).unwrap() * (1.0 / 4.0) * h;
            }
            assert!((acc - 1.0).abs() < 1e-6, "x={x}: {acc}");
        }
    }

    #[test]
    fn source_cdf_steps() {
        let m = UniformAdditiveMechanism::new(16).unwrap();
        assert_eq!(m.cdf(-0.2), 0.0);
        assert_eq!(m.cdf(0.0), 1.0 / 16.0);
        assert_eq!(m.cdf(7.5), 8.0 / 16.0);
        assert_eq!(m.cdf(15.0), 1.0);
        assert_eq!(m.cdf(40.0), 1.0);
    }
}
