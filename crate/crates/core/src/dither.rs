//! Dithered and layered quantiser codes.
//!
//! The dithered quantiser rounds `x` plus a shared uniform dither and
//! entropy-codes the integer index under its conditional distribution given
//! the dither; subtracting the dither after decoding makes the
//! reconstruction error exactly `Unif(-1/2, 1/2]`. The layered quantiser
//! runs the same machinery on a randomly scaled and shifted grid, where the
//! scale law comes from a scale-mixture-of-shifted-uniforms representation
//! of the target noise, realising arbitrary one-dimensional unimodal
//! additive noise.
//!
//! Index codewords use a Shannon-Fano-Elias construction driven directly by
//! the conditional integer CDF: prefix-free, `ceil(-lb pmf) + 1` bits per
//! record, no table construction, decodable by monotone bisection. All
//! codeword arithmetic happens on a 2^-64 fixed-point grid, which doubles as
//! the per-symbol probability floor: indices with less mass are refused.
//!
//! Wire contract per record: the layered code consumes the scale draws
//! first, then exactly one uniform for the dither; the plain dithered code
//! consumes just the dither draw.

use crate::bits::{BitCursor, BitString, CodeError};
use crate::models::SourceDistribution;
use crate::stream::DeterministicStream;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DitherError {
    /// The modelled source puts less than 2^-64 mass on this index.
    #[error("index {index} has probability below 2^-64 under the record model")]
    ZeroProbabilitySymbol { index: i64 },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("decoder bracket expansion exceeded a 2^64 integer span")]
    BracketExpansionFailed,
    #[error("scale sampler produced non-positive scale {0}")]
    InvalidScale(f64),
}

/// Round half up: `floor(x + 1/2)`, sending exact halves towards +inf.
#[inline]
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// `P[N <= n | U = u]` for the dithered quantiser: the source CDF at
/// `n - u + 1/2`.
#[inline]
pub fn dq_index_cdf(source: &dyn SourceDistribution, u: f64, n: i64) -> f64 {
    source.cdf(n as f64 - u + 0.5)
}

/// `P[N <= n | U = u, S = s]` for the layered quantiser: the source CDF at
/// `s * (n - b(s) - u + 1/2)`.
#[inline]
pub fn lq_index_cdf(source: &dyn SourceDistribution, u: f64, s: f64, b_of_s: f64, n: i64) -> f64 {
    source.cdf(s * (n as f64 - b_of_s - u + 0.5))
}

/// One quantised record; the reconstruction is `scale * (index - dither)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DitherRecord {
    pub index: i64,
    pub dither: f64,
    pub scale: f64,
}

impl DitherRecord {
    pub fn reconstruction(&self) -> f64 {
        self.scale * (self.index as f64 - self.dither)
    }
}

/// Integer CDF with a support hint, evaluated on the 2^-64 fixed-point grid.
///
/// `low..=high` is a hint only: outside it each tail holds less than one
/// grid unit of mass, and the decoder expands the bracket geometrically if a
/// codeword points beyond it.
pub struct IntegerCdf<'a> {
    eval: Box<dyn Fn(i64) -> f64 + 'a>,
    low: i64,
    high: i64,
}

const ONE: u128 = 1u128 << 64;

impl<'a> IntegerCdf<'a> {
    pub fn new(eval: impl Fn(i64) -> f64 + 'a, low: i64, high: i64) -> Self {
        Self {
            eval: Box::new(eval),
            low: low.min(high),
            high: high.max(low),
        }
    }

    /// Conditional index law of the dithered quantiser given the dither.
    pub fn dithered(source: &'a dyn SourceDistribution, u: f64) -> Self {
        let (lo, hi) = source.support();
        Self::new(
            move |n| dq_index_cdf(source, u, n),
            (lo + u - 0.5).floor() as i64 - 1,
            (hi + u - 0.5).ceil() as i64 + 1,
        )
    }

    /// Conditional index law of the layered quantiser given dither and scale.
    pub fn layered(source: &'a dyn SourceDistribution, u: f64, s: f64, b_of_s: f64) -> Self {
        let (lo, hi) = source.support();
        Self::new(
            move |n| lq_index_cdf(source, u, s, b_of_s, n),
            (lo / s + b_of_s + u - 0.5).floor() as i64 - 1,
            (hi / s + b_of_s + u - 0.5).ceil() as i64 + 1,
        )
    }

    pub fn support_hint(&self) -> (i64, i64) {
        (self.low, self.high)
    }

    pub fn cdf(&self, n: i64) -> f64 {
        (self.eval)(n)
    }

    /// CDF value on the fixed-point grid, clamped into [0, 2^64].
    fn fixed(&self, n: i64) -> u128 {
        let v = (self.eval)(n);
        if !(v > 0.0) {
            return 0;
        }
        if v >= 1.0 {
            return ONE;
        }
        let scaled = (v * ONE as f64).round();
        (scaled as u128).min(ONE)
    }

    pub fn pmf(&self, n: i64) -> f64 {
        (self.fixed(n).saturating_sub(self.fixed(n - 1))) as f64 / ONE as f64
    }
}

/// Codeword length for a fixed-point mass `p`: `ceil(-lb p) + 1`.
fn sfe_len(mass: u128) -> u32 {
    debug_assert!(mass >= 1 && mass <= ONE);
    // floor(lb mass) = 127 - leading_zeros
    65 - (127 - mass.leading_zeros())
}

/// Shannon-Fano-Elias codeword for index `n`: the first `ceil(-lb pmf)+1`
/// bits of `cdf(n-1) + pmf(n)/2`.
pub fn sfe_encode(cdf: &IntegerCdf, n: i64) -> Result<BitString, DitherError> {
    let c_prev = cdf.fixed(n - 1);
    let mass = cdf.fixed(n).saturating_sub(c_prev);
    if mass == 0 {
        return Err(DitherError::ZeroProbabilitySymbol { index: n });
    }
    let len = sfe_len(mass);
    // midpoint on the half-unit grid: 2*cdf(n-1) + pmf in 2^-65 units
    let mid = 2 * c_prev + mass;
    let mut out = BitString::new();
    for i in 1..=len {
        out.push((mid >> (65 - i)) & 1 == 1);
    }
    Ok(out)
}

/// Decodes one SFE codeword and advances the cursor past it.
///
/// Reads 65 bits of lookahead (zero-padded past the end of the payload),
/// locates the unique index whose CDF interval contains it by bisection
/// over the support hint, then derives the codeword length from that index.
pub fn sfe_decode(
    cdf: &IntegerCdf,
    bits: &BitString,
    cursor: &mut BitCursor,
) -> Result<i64, DitherError> {
    if cursor.remaining(bits) == 0 {
        return Err(DitherError::Code(CodeError::Truncated {
            position: cursor.position(),
        }));
    }
    let mut window: u128 = 0;
    for i in 0..65usize {
        window <<= 1;
        if let Some(true) = bits.get(cursor.position() + i) {
            window |= 1;
        }
    }

    let (mut lo, mut hi) = (cdf.support_hint().0 as i128, cdf.support_hint().1 as i128);
    let at = |n: i128| -> u128 {
        let n = n.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
        2 * cdf.fixed(n)
    };
    let mut span = (hi - lo).max(1);
    while at(hi) <= window {
        hi += span;
        span *= 2;
        if span > (1i128 << 65) {
            return Err(DitherError::BracketExpansionFailed);
        }
    }
    let mut span = (hi - lo).max(1);
    while lo > i64::MIN as i128 && at(lo - 1) > window {
        lo -= span;
        span *= 2;
        if span > (1i128 << 65) {
            return Err(DitherError::BracketExpansionFailed);
        }
    }
    // smallest n with window < 2*cdf(n)
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if window < at(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let n = lo as i64;

    let mass = cdf.fixed(n).saturating_sub(cdf.fixed(n - 1));
    debug_assert!(mass >= 1, "bisection landed on a zero-mass cell");
    let len = sfe_len(mass) as usize;
    if cursor.remaining(bits) < len {
        return Err(DitherError::Code(CodeError::Truncated {
            position: cursor.position(),
        }));
    }
    cursor.skip(len);
    Ok(n)
}

/// Scale mixture of shifted uniforms: `noise ~ S * (U + b(S))` with
/// `U ~ Unif(-1/2, 1/2)` and `S > 0`.
pub struct SmsuRepresentation {
    scale_sampler: Box<dyn Fn(&mut DeterministicStream) -> f64 + Send + Sync>,
    offset: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    noise_cdf: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl SmsuRepresentation {
    pub fn new(
        scale_sampler: impl Fn(&mut DeterministicStream) -> f64 + Send + Sync + 'static,
        offset: impl Fn(f64) -> f64 + Send + Sync + 'static,
        noise_cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            scale_sampler: Box::new(scale_sampler),
            offset: Box::new(offset),
            noise_cdf: Box::new(noise_cdf),
        }
    }

    /// Degenerate representation `S = 1`, `b = 0`: the noise is the plain
    /// uniform dither and the layered code reduces to the dithered code.
    pub fn unit_uniform() -> Self {
        Self::new(
            |_| 1.0,
            |_| 0.0,
            |e| (e + 0.5).clamp(0.0, 1.0),
        )
    }

    /// `N(0, sigma^2)` noise: the scale is `2 sigma` times a chi-distributed
    /// variable with 3 degrees of freedom and the offset is zero, so that
    /// `S * U` has exactly the target normal law.
    pub fn gaussian(sigma: f64) -> Self {
        assert!(sigma > 0.0 && sigma.is_finite());
        Self::new(
            move |stream| {
                let g1 = stream.next_gaussian();
                let g2 = stream.next_gaussian();
                let g3 = stream.next_gaussian();
                2.0 * sigma * (g1 * g1 + g2 * g2 + g3 * g3).sqrt()
            },
            |_| 0.0,
            move |e| crate::math::normal_cdf(e / sigma),
        )
    }

    /// Draws `S`; consumes a fixed number of raw draws per call.
    pub fn sample_scale(&self, stream: &mut DeterministicStream) -> f64 {
        (self.scale_sampler)(stream)
    }

    pub fn offset(&self, s: f64) -> f64 {
        (self.offset)(s)
    }

    pub fn noise_cdf(&self, e: f64) -> f64 {
        (self.noise_cdf)(e)
    }
}

/// Standard normal SMSU: scale `2 * chi(3)`, offset zero.
pub fn gaussian_smsu() -> SmsuRepresentation {
    SmsuRepresentation::gaussian(1.0)
}

fn draw_dither(stream: &mut DeterministicStream) -> f64 {
    stream.next_uniform() - 0.5
}

/// Quantises `x` against a known dither; exposed for the deterministic
/// bracket checks.
pub fn dq_quantise(x: f64, u: f64) -> DitherRecord {
    DitherRecord {
        index: round_half_up(x + u),
        dither: u,
        scale: 1.0,
    }
}

/// Dithered quantiser encoder: one dither draw, one SFE codeword.
pub fn dq_encode(
    source: &dyn SourceDistribution,
    x: f64,
    seed: u64,
    substream: u64,
) -> Result<BitString, DitherError> {
    let mut stream = DeterministicStream::new(seed, substream);
    let u = draw_dither(&mut stream);
    let record = dq_quantise(x, u);
    let cdf = IntegerCdf::dithered(source, u);
    sfe_encode(&cdf, record.index)
}

/// Dithered quantiser decoder: regenerates the dither, decodes the index,
/// returns `n - u`. The reconstruction error `y - x` lies in `(-1/2, 1/2]`
/// deterministically.
pub fn dq_decode(
    source: &dyn SourceDistribution,
    bits: &BitString,
    cursor: &mut BitCursor,
    seed: u64,
    substream: u64,
) -> Result<f64, DitherError> {
    let mut stream = DeterministicStream::new(seed, substream);
    let u = draw_dither(&mut stream);
    let cdf = IntegerCdf::dithered(source, u);
    let n = sfe_decode(&cdf, bits, cursor)?;
    Ok(n as f64 - u)
}

/// Layered quantiser encoder: scale draws first, then the dither draw.
pub fn lq_encode(
    source: &dyn SourceDistribution,
    smsu: &SmsuRepresentation,
    x: f64,
    seed: u64,
    substream: u64,
) -> Result<BitString, DitherError> {
    let mut stream = DeterministicStream::new(seed, substream);
    let s = smsu.sample_scale(&mut stream);
    if !(s > 0.0) {
        return Err(DitherError::InvalidScale(s));
    }
    let u = draw_dither(&mut stream);
    let b = smsu.offset(s);
    let index = round_half_up(x / s + b + u);
    let cdf = IntegerCdf::layered(source, u, s, b);
    sfe_encode(&cdf, index)
}

/// Layered quantiser decoder: returns `s * (n - u)`.
pub fn lq_decode(
    source: &dyn SourceDistribution,
    smsu: &SmsuRepresentation,
    bits: &BitString,
    cursor: &mut BitCursor,
    seed: u64,
    substream: u64,
) -> Result<f64, DitherError> {
    let mut stream = DeterministicStream::new(seed, substream);
    let s = smsu.sample_scale(&mut stream);
    if !(s > 0.0) {
        return Err(DitherError::InvalidScale(s));
    }
    let u = draw_dither(&mut stream);
    let b = smsu.offset(s);
    let cdf = IntegerCdf::layered(source, u, s, b);
    let n = sfe_decode(&cdf, bits, cursor)?;
    Ok(s * (n as f64 - u))
}
