//! Scalar special functions used on coder paths.
//!
//! Everything here must be bit-reproducible across platforms: transcendental
//! primitives go through `libm` (pure Rust, same code everywhere) rather than
//! the platform math library, and the normal quantile is a fixed rational
//! approximation evaluated with plain IEEE arithmetic.

use std::f64::consts::FRAC_1_SQRT_2;

/// Natural log, deterministic across platforms.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// Exponential, deterministic across platforms.
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Standard normal CDF via the complementary error function.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal quantile (inverse CDF) for p in (0, 1).
///
/// Wichura's PPND16 rational approximation, accurate to ~1e-16 relative
/// error over the full open interval. Panics on p outside (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "normal_quantile domain is (0,1), got {p}");

    const A: [f64; 8] = [
        3.387_132_872_796_366_608e0,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 7] = [
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34e0,
        4.630_337_846_156_545_295_9e0,
        5.769_497_221_460_691_405_5e0,
        3.647_848_324_763_204_605_04e0,
        1.270_458_252_452_368_382_58e0,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 7] = [
        2.053_191_626_637_758_821_87e0,
        1.676_384_830_183_803_849_4e0,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2e0,
        5.463_784_911_164_114_369_9e0,
        1.784_826_539_917_291_335_8e0,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 7] = [
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    #[inline]
    fn poly(coeffs: &[f64], r: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        // denominator is 1 + r*(b1 + r*(...))
        return q * poly(&A, r) / (poly(&B, r) * r + 1.0);
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = (-ln(r)).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / (poly(&D, r) * r + 1.0)
    } else {
        let r = r - 5.0;
        poly(&E, r) / (poly(&F, r) * r + 1.0)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// Binary logarithm.
#[inline]
pub fn lb(x: f64) -> f64 {
    libm::log2(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_median_is_zero() {
        assert_eq!(normal_quantile(0.5), 0.0);
    }

    #[test]
    fn quantile_matches_known_points() {
        // Reference values for the standard normal quantile.
        let cases = [
            (0.975, 1.959_963_984_540_054),
            (0.841_344_746_068_543, 1.0),
            (0.99, 2.326_347_874_040_841),
            (1e-10, -6.361_340_902_404_056),
        ];
        for (p, z) in cases {
            assert!(
                (normal_quantile(p) - z).abs() < 1e-9,
                "quantile({p}) = {} != {z}",
                normal_quantile(p)
            );
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        // lower half only: for x >> 0 the cdf output itself cannot carry the
        // tail precision, which symmetry covers instead
        for i in 1..200 {
            let x = -8.0 + 8.5 * (i as f64) / 200.0;
            let p = normal_cdf(x);
            assert!((normal_quantile(p) - x).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn cdf_symmetry() {
        for i in 0..50 {
            let x = 0.1 * i as f64;
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-15);
        }
    }
}
