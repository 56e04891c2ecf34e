//! Scalar special functions and the small-sample constants `k_n` and `c4(n)`.
//!
//! Everything here is a pure function of its arguments. Arguments are
//! validated up front: NaN and out-of-domain inputs produce [`Error::Domain`]
//! rather than a propagated NaN.

use std::f64::consts::SQRT_2;

use crate::error::{ensure_finite, Error, Result};

/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Number of return observations in a sample.
///
/// Construction enforces `n >= 2`, the smallest sample for which a
/// Bessel-corrected standard deviation exists. Functions that need larger
/// samples check their own thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SampleSize(u32);

impl SampleSize {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(
                "n",
                n as f64,
                "sample size must be at least 2",
            ));
        }
        Ok(SampleSize(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Degrees of freedom `n - 1` of the associated t statistic.
    pub fn dof(self) -> u32 {
        self.0 - 1
    }

    pub(crate) fn as_f64(self) -> f64 {
        self.0 as f64
    }

    fn require(self, min: u32, requirement: &'static str) -> Result<Self> {
        if self.0 < min {
            Err(Error::domain("n", self.0 as f64, requirement))
        } else {
            Ok(self)
        }
    }
}

impl TryFrom<u32> for SampleSize {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        SampleSize::new(n)
    }
}

impl std::fmt::Display for SampleSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

// zeta(k) - 1 for k = 2..=30
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 29] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
    0.000_994_575_127_818_085_3,
    0.000_494_188_604_119_464_6,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_1,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_961e-7,
    4.769_329_867_878_065e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_429e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
];

/// ln Γ(2 + z) for |z| <= 0.5 from its Taylor series about 2.
///
/// The series keeps full relative accuracy through the zero of ln Γ at 2.
fn ln_gamma_2p(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        zk *= -z;
        sum += c * zk / (i + 2) as f64;
    }
    (1.0 - EULER_GAMMA) * z - sum
}

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

fn ln_gamma_lanczos(x: f64) -> f64 {
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_1;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// ln Γ for an argument already known to be positive and finite.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_2p(x) - x.ln_1p() - x.ln()
    } else if x < 1.5 {
        ln_gamma_2p(x - 1.0) - (x - 1.0).ln_1p()
    } else if x <= 2.5 {
        ln_gamma_2p(x - 2.0)
    } else {
        ln_gamma_lanczos(x)
    }
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("x", x, "ln_gamma requires a finite x > 0"));
    }
    Ok(ln_gamma_pos(x))
}

/// ln Γ(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)], valid for x >= 10.
fn stirling_correction(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let x2 = 1.0 / (x * x);
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * x2 + c;
    }
    acc / x
}

/// ln B(a, b) for positive finite `a`, `b`.
///
/// Large arguments go through Stirling corrections so that the huge
/// ln Γ terms never have to cancel.
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let r = p / (p + q);
    if p >= 10.0 {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * r.ln() + q * (-r).ln_1p()
    } else if q >= 10.0 {
        let corr = stirling_correction(q) - stirling_correction(p + q);
        ln_gamma_pos(p) + corr + p - p * (p + q).ln() + (q - 0.5) * (-r).ln_1p()
    } else {
        ln_gamma_pos(p) + ln_gamma_pos(q) - ln_gamma_pos(p + q)
    }
}

/// y^a (1-y)^b / B(a, b), with the complement `1 - y` supplied by the caller
/// so that it can be formed without cancellation.
pub(crate) fn beta_kernel(y: f64, y_comp: f64, a: f64, b: f64) -> f64 {
    if y <= 0.0 || y_comp <= 0.0 {
        return 0.0;
    }
    (a * y.ln() + b * y_comp.ln() - ln_beta(a, b)).exp()
}

const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Continued fraction for I_y(a, b), modified Lentz evaluation.
fn beta_continued_fraction(y: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * y / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * y / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::Numeric {
        routine: "reg_inc_beta",
        detail: format!("continued fraction did not converge for y={y}, a={a}, b={b}"),
    })
}

/// I_y(a, b) with `y_comp = 1 - y` supplied separately. No argument checks.
pub(crate) fn inc_beta(y: f64, y_comp: f64, a: f64, b: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y_comp <= 0.0 {
        return Ok(1.0);
    }
    let kernel = beta_kernel(y, y_comp, a, b);
    if y < (a + 1.0) / (a + b + 2.0) {
        Ok(kernel * beta_continued_fraction(y, a, b)? / a)
    } else {
        Ok(1.0 - kernel * beta_continued_fraction(y_comp, b, a)? / b)
    }
}

/// Regularized incomplete beta function I_y(a, b).
pub fn reg_inc_beta(y: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain("y", y, "must lie in [0, 1]"));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain("a", a, "must be finite and positive"));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain("b", b, "must be finite and positive"));
    }
    inc_beta(y, 1.0 - y, a, b)
}

/// Φ(x) without argument checks; NaN in gives NaN out.
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal cumulative distribution function.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("x", x, "must not be NaN"));
    }
    Ok(phi(x))
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16).
#[allow(clippy::inconsistent_digit_grouping, clippy::excessive_precision)]
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain("p", p, "must lie strictly between 0 and 1"));
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((r * 2509.080_928_730_122_7 + 33430.575_583_588_128) * r
            + 67265.770_927_008_7)
            * r
            + 45921.953_931_549_87)
            * r
            + 13731.693_765_509_461)
            * r
            + 1971.590_950_306_551_4)
            * r
            + 133.141_667_891_784_38)
            * r
            + 3.387_132_872_796_366_6;
        let den = ((((((r * 5226.495_278_852_546 + 28729.085_735_721_943) * r
            + 39307.895_800_092_71)
            * r
            + 21213.794_301_586_596)
            * r
            + 5394.196_021_424_751)
            * r
            + 687.187_007_492_057_9)
            * r
            + 42.313_330_701_600_91)
            * r
            + 1.0;
        return Ok(q * num / den);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((r * 7.745_450_142_783_414e-4 + 0.022_723_844_989_269_184) * r
            + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_205)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((r * 1.050_750_071_644_416_8e-9 + 5.475_938_084_995_345e-4) * r
            + 0.015_198_666_563_616_457)
            * r
            + 0.148_103_976_427_480_08)
            * r
            + 0.689_767_334_985_1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((r * 2.010_334_399_292_288e-7 + 2.711_555_568_743_487_6e-5) * r
            + 0.001_242_660_947_388_078_4)
            * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103_5;
        let den = ((((((r * 2.044_263_103_389_939_8e-15 + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 0.014_875_361_290_850_615)
            * r
            + 0.136_929_880_922_735_8)
            * r
            + 0.599_832_206_555_887_9)
            * r
            + 1.0;
        num / den
    };
    Ok(if q < 0.0 { -val } else { val })
}

/// Multiplicative small-sample bias of the empirical Sharpe ratio,
/// `k_n = sqrt((n-1)/2) Γ((n-2)/2) / Γ((n-1)/2)`. Needs `n >= 3`.
pub fn k_n(n: SampleSize) -> Result<f64> {
    let n = n.require(3, "k_n requires n >= 3 (the first moment does not exist)")?;
    let nf = n.as_f64();
    let lr = ln_gamma_pos((nf - 2.0) / 2.0) - ln_gamma_pos((nf - 1.0) / 2.0);
    Ok(((nf - 1.0) / 2.0).sqrt() * lr.exp())
}

/// Closed-form approximants of [`k_n`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnApprox {
    /// `1 + 3/(4n) + 25/(32 n^2)`
    Series,
    /// `1 / (1 - 3/(4n - 5))`
    Rational,
}

pub fn k_n_approx(n: SampleSize, variant: KnApprox) -> Result<f64> {
    let n = n.require(3, "k_n approximations require n >= 3")?;
    let nf = n.as_f64();
    Ok(match variant {
        KnApprox::Series => 1.0 + 3.0 / (4.0 * nf) + 25.0 / (32.0 * nf * nf),
        KnApprox::Rational => 1.0 / (1.0 - 3.0 / (4.0 * nf - 5.0)),
    })
}

/// Bias constant of the sample standard deviation,
/// `c4(n) = sqrt(2/(n-1)) Γ(n/2) / Γ((n-1)/2)`.
pub fn c4(n: SampleSize) -> f64 {
    let nf = n.as_f64();
    let lr = ln_gamma_pos(nf / 2.0) - ln_gamma_pos((nf - 1.0) / 2.0);
    (2.0 / (nf - 1.0)).sqrt() * lr.exp()
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<f64> {
    ensure_finite(name, p)?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::domain(name, p, "must lie strictly between 0 and 1"))
    }
}
