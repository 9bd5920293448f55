//! Log-gamma and log-beta.
//!
//! `ln Γ(x)` is evaluated piecewise so that relative accuracy holds near the
//! zeros at x = 1 and x = 2:
//!
//! * `x ∈ [1.5, 2.5)`: Taylor series of `ln Γ(2 + z)` in `z = x − 2`, written
//!   with `ζ(k) − 1` coefficients so it converges like `(z/2)^k`.
//! * `x ∈ [0.5, 1.5)`: `ln Γ(1 + z) = ln Γ(2 + z) − ln(1 + z)`.
//! * `x < 0.5`: `ln Γ(x) = ln Γ(1 + x) − ln x`.
//! * `x ∈ [2.5, 10)`: downward recurrence into `[1.5, 2.5)`.
//! * `x ≥ 10`: Stirling series with eight Bernoulli terms (truncation < 2e-17).

use super::SpecFunError;

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
pub(crate) const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;
pub(crate) const LN_PI: f64 = 1.144_729_885_849_400_174_1;

/// `ζ(k) − 1` for `k = 2..=40`.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 39] = [
    0.644_934_066_848_226_436_47,
    0.202_056_903_159_594_285_40,
    0.082_323_233_711_138_191_516,
    0.036_927_755_143_369_926_331,
    0.017_343_061_984_449_139_715,
    0.008_349_277_381_922_826_839_8,
    0.004_077_356_197_944_339_378_7,
    0.002_008_392_826_082_214_417_9,
    0.000_994_575_127_818_085_337_15,
    0.000_494_188_604_119_464_558_7,
    0.000_246_086_553_308_048_298_64,
    0.000_122_713_347_578_489_146_75,
    6.124_813_505_870_482_925_9e-5,
    3.058_823_630_702_049_355_2e-5,
    1.528_225_940_865_187_173_3e-5,
    7.637_197_637_899_762_273_6e-6,
    3.817_293_264_999_839_856_5e-6,
    1.908_212_716_553_938_925_7e-6,
    9.539_620_338_727_961_131_5e-7,
    4.769_329_867_878_064_631_2e-7,
    2.384_505_027_277_329_900_0e-7,
    1.192_199_259_653_110_730_7e-7,
    5.960_818_905_125_947_961_2e-8,
    2.980_350_351_465_228_018_6e-8,
    1.490_155_482_836_504_123_5e-8,
    7.450_711_789_835_429_492_0e-9,
    3.725_334_024_788_457_054_8e-9,
    1.862_659_723_513_049_006_4e-9,
    9.313_274_324_196_681_828_7e-10,
    4.656_629_065_033_784_073_0e-10,
    2.328_311_833_676_505_492_0e-10,
    1.164_155_017_270_051_977_6e-10,
    5.820_772_087_902_700_889_2e-11,
    2.910_385_044_497_099_686_9e-11,
    1.455_192_189_104_198_423_6e-11,
    7.275_959_835_057_481_014_5e-12,
    3.637_979_547_378_651_190_2e-12,
    1.818_989_650_307_065_947_6e-12,
    9.094_947_840_263_889_282_5e-13,
];

/// Stirling coefficients `B_{2k} / (2k (2k − 1))`, k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::domain("log_gamma", "x", x, "0 < x < inf"));
    }
    Ok(ln_gamma(x))
}

/// `ln Γ(2 + z)` for `|z| ≤ 0.5`.
fn ln_gamma_two_plus(z: f64) -> f64 {
    // Σ_{k≥2} (−1)^k (ζ(k) − 1) z^k / k, by Horner from the top.
    let mut acc = 0.0;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * z + sign * c / k;
    }
    z * (1.0 - EULER_GAMMA) + z * z * acc
}

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Unchecked `ln Γ(x)`; the caller guarantees `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_two_plus(x) - x.ln_1p() - x.ln()
    } else if x < 1.5 {
        let z = x - 1.0;
        ln_gamma_two_plus(z) - z.ln_1p()
    } else if x < 2.5 {
        ln_gamma_two_plus(x - 2.0)
    } else if x < 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        prod.ln() + ln_gamma_two_plus(y - 2.0)
    } else {
        (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_series(x)
    }
}

/// Remainder of Stirling's approximation,
/// `ln Γ(x) − [(x − ½) ln x − x + ½ ln 2π]`.
pub(crate) fn stirling_remainder(x: f64) -> f64 {
    if x >= 10.0 {
        stirling_series(x)
    } else {
        ln_gamma(x) - ((x - 0.5) * x.ln() - x + HALF_LN_2PI)
    }
}

/// `ln Γ(a) − ln Γ(a + b)` without cancellation between two large values.
pub(crate) fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    if a >= 10.0 {
        let ab = a + b;
        -(a - 0.5) * (b / a).ln_1p() - b * ab.ln() + b + stirling_remainder(a)
            - stirling_remainder(ab)
    } else {
        ln_gamma(a) - ln_gamma(a + b)
    }
}

/// `ln B(a, b)` for positive arguments.
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, big) = if a < b { (a, b) } else { (b, a) };
    ln_gamma(small) + ln_gamma_ratio(big, small)
}
