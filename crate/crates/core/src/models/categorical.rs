//! Finite-alphabet mechanism with exact arithmetic oracles.

use super::{symbol_index, Mechanism, ModelError, SourceDistribution};
use crate::math::lb;
use crate::stream::DeterministicStream;

/// Finite source over `{0..m'-1}` and channel rows over `{0..m-1}`.
///
/// The marginal is the exact pmf mixture, so density ratios and mutual
/// information are computable without any numerical integration.
#[derive(Debug, Clone)]
pub struct CategoricalMechanism {
    source_pmf: Vec<f64>,
    channel_rows: Vec<Vec<f64>>,
    marginal: Vec<f64>,
}

const PMF_SUM_TOL: f64 = 1e-12;

fn check_pmf(p: &[f64], what: &str) -> Result<(), ModelError> {
    if p.is_empty() {
        return Err(ModelError::InvalidParameter(format!("{what} is empty")));
    }
    if p.iter().any(|&v| !(0.0..=1.0).contains(&v) || !v.is_finite()) {
        return Err(ModelError::InvalidParameter(format!(
            "{what} has entries outside [0,1]"
        )));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > PMF_SUM_TOL {
        return Err(ModelError::InvalidParameter(format!(
            "{what} sums to {s}, not 1"
        )));
    }
    Ok(())
}

impl CategoricalMechanism {
    pub fn new(source_pmf: Vec<f64>, channel_rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        check_pmf(&source_pmf, "source pmf")?;
        if channel_rows.len() != source_pmf.len() {
            return Err(ModelError::InvalidParameter(
                "one channel row per source symbol required".into(),
            ));
        }
        let m = channel_rows[0].len();
        for (i, row) in channel_rows.iter().enumerate() {
            if row.len() != m {
                return Err(ModelError::InvalidParameter(format!(
                    "channel row {i} has length {} != {m}",
                    row.len()
                )));
            }
            check_pmf(row, &format!("channel row {i}"))?;
        }
        let mut marginal = vec![0.0; m];
        for (px, row) in source_pmf.iter().zip(&channel_rows) {
            for (my, ry) in marginal.iter_mut().zip(row) {
                *my += px * ry;
            }
        }
        Ok(Self {
            source_pmf,
            channel_rows,
            marginal,
        })
    }

    /// The two-input binary instance used throughout the verification suite:
    /// X uniform on {0,1}, rows (0.8, 0.2) / (0.2, 0.8), marginal (0.5, 0.5).
    pub fn binary_asymmetric() -> Self {
        Self::new(
            vec![0.5, 0.5],
            vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        )
        .unwrap()
    }

    /// Channel identical to the marginal for every input: I(X;Y) = 0 and
    /// every selection sampler accepts its first proposal.
    pub fn degenerate(source_pmf: Vec<f64>, output_pmf: Vec<f64>) -> Result<Self, ModelError> {
        let rows = vec![output_pmf; source_pmf.len()];
        Self::new(source_pmf, rows)
    }

    pub fn input_alphabet(&self) -> usize {
        self.source_pmf.len()
    }

    pub fn marginal_pmf(&self) -> &[f64] {
        &self.marginal
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.channel_rows[x]
    }

    fn sample_pmf(pmf: &[f64], u: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &p) in pmf.iter().enumerate() {
            acc += p;
            if u <= acc {
                return i as f64;
            }
        }
        (pmf.len() - 1) as f64
    }
}

impl SourceDistribution for CategoricalMechanism {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = (x.floor() as usize).min(self.source_pmf.len() - 1);
        self.source_pmf[..=k].iter().sum::<f64>().min(1.0)
    }

    fn support(&self) -> (f64, f64) {
        (-1.0, self.source_pmf.len() as f64)
    }

    fn sample(&self, stream: &mut DeterministicStream) -> f64 {
        Self::sample_pmf(&self.source_pmf, stream.next_uniform())
    }
}

impl Mechanism for CategoricalMechanism {
    fn label(&self) -> String {
        format!(
            "categorical({}x{})",
            self.source_pmf.len(),
            self.marginal.len()
        )
    }

    fn marginal_sample(&self, stream: &mut DeterministicStream) -> f64 {
        Self::sample_pmf(&self.marginal, stream.next_uniform())
    }

    fn density_ratio(&self, x: f64, y: f64) -> Result<f64, ModelError> {
        let xi = symbol_index(x, self.source_pmf.len())?;
        let yi = symbol_index(y, self.marginal.len())?;
        if self.marginal[yi] == 0.0 {
            return Err(ModelError::UndefinedRatio(y));
        }
        Ok(self.channel_rows[xi][yi] / self.marginal[yi])
    }

    fn ratio_sup(&self, x: f64) -> Result<f64, ModelError> {
        let xi = symbol_index(x, self.source_pmf.len())?;
        let mut sup = 0.0f64;
        for (yi, &p) in self.channel_rows[xi].iter().enumerate() {
            if p > 0.0 {
                if self.marginal[yi] == 0.0 {
                    return Err(ModelError::UnboundedRatio(x));
                }
                sup = sup.max(p / self.marginal[yi]);
            }
        }
        Ok(sup)
    }

    fn conditional_cdf(&self, x: f64, y: f64) -> f64 {
        let Ok(xi) = symbol_index(x, self.source_pmf.len()) else {
            return f64::NAN;
        };
        if y < 0.0 {
            return 0.0;
        }
        let k = (y.floor() as usize).min(self.marginal.len() - 1);
        self.channel_rows[xi][..=k].iter().sum::<f64>().min(1.0)
    }

    fn mutual_information(&self) -> Option<f64> {
        let mut mi = 0.0;
        for (px, row) in self.source_pmf.iter().zip(&self.channel_rows) {
            for (py, ry) in self.marginal.iter().zip(row) {
                if *px > 0.0 && *ry > 0.0 {
                    mi += px * ry * lb(ry / py);
                }
            }
        }
        Some(mi)
    }

    fn output_alphabet(&self) -> Option<usize> {
        Some(self.marginal.len())
    }
}
