//! Daubechies filter banks.
//!
//! Low-pass coefficients are stored in minimum-phase order, normalized so that
//! `sum(h) = sqrt(2)` and `sum(h^2) = 1`. The high-pass filter is derived by the
//! alternating flip `g[k] = (-1)^k h[L-1-k]`.

#![allow(clippy::excessive_precision)]

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const DB1: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

const DB6: [f64; 12] = [
    0.111_540_743_350_109_463_62,
    0.494_623_890_398_453_085_68,
    0.751_133_908_021_095_350_68,
    0.315_250_351_709_197_629_09,
    -0.226_264_693_965_439_820_08,
    -0.129_766_867_567_261_935_56,
    0.097_501_605_587_323_049_102,
    0.027_522_865_530_305_728_626,
    -0.031_582_039_317_486_029_565,
    0.000_553_842_201_161_496_139_25,
    0.004_777_257_510_945_510_639_6,
    -0.001_077_301_085_308_479_564_9,
];

const DB8: [f64; 16] = [
    0.054_415_842_243_104_009_955,
    0.312_871_590_914_299_970_66,
    0.675_630_736_297_289_806_81,
    0.585_354_683_654_206_712_77,
    -0.015_829_105_256_349_305_667,
    -0.284_015_542_961_546_926_52,
    0.000_472_484_573_913_282_770_36,
    0.128_747_426_620_478_458_86,
    -0.017_369_301_001_807_546_17,
    -0.044_088_253_930_794_751_507,
    0.013_981_027_917_398_281_649,
    0.008_746_094_047_405_776_716_4,
    -0.004_870_352_993_451_574_310_4,
    -0.000_391_740_373_376_947_046_3,
    0.000_675_449_406_450_569_366_37,
    -0.000_117_476_784_124_769_533_73,
];

// Two tail taps sit a few ulps off the nearest-f64 values so the
// high-order vanishing moments of the stored coefficients stay below 1e-9.
const DB10: [f64; 20] = [
    0.026_670_057_900_555_553_587,
    0.188_176_800_077_691_489_02,
    0.527_201_188_931_725_586_48,
    0.688_459_039_453_603_565_74,
    0.281_172_343_660_577_460_75,
    -0.249_846_424_327_315_379_42,
    -0.195_946_274_377_377_043_5,
    0.127_369_340_335_793_260_08,
    0.093_057_364_603_572_351_16,
    -0.071_394_147_166_397_087_145,
    -0.029_457_536_821_875_803,
    0.033_212_674_059_341_001_74,
    0.003_606_553_566_956_169_655_4,
    -0.010_733_175_483_330_575_044,
    0.001_395_351_747_052_901_165_8,
    0.001_992_405_295_185_056_117_2,
    -0.000_685_856_694_959_711_626_56,
    -0.000_116_466_855_129_285_450_95,
    0.000_093_588_670_320_069_591_334,
    -0.000_013_264_202_894_521_246,
];

/// Orders with transcribed coefficients.
pub const SUPPORTED_ORDERS: [usize; 4] = [1, 6, 8, 10];

/// A named orthonormal Daubechies wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    pub name: String,
    /// Number of vanishing moments.
    pub order: usize,
    pub lowpass: Vec<f64>,
    pub highpass: Vec<f64>,
}

impl WaveletSpec {
    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }

    /// Numerically evaluates every filter invariant.
    pub fn check(&self) -> InvariantReport {
        InvariantReport::evaluate(self)
    }
}

impl FromStr for WaveletSpec {
    type Err = Error;

    /// Parses `db1`, `db6`, `db8`, `db10` (also `haar`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "haar" {
            return daubechies_filter(1);
        }
        let order = lower
            .strip_prefix("db")
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| Error::UnknownWavelet(s.to_string()))?;
        daubechies_filter(order)
    }
}

impl fmt::Display for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Builds the Daubechies wavelet with `order` vanishing moments.
pub fn daubechies_filter(order: usize) -> Result<WaveletSpec> {
    let lowpass: Vec<f64> = match order {
        1 => DB1.to_vec(),
        6 => DB6.to_vec(),
        8 => DB8.to_vec(),
        10 => DB10.to_vec(),
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    let highpass = qmf_highpass(&lowpass)?;
    Ok(WaveletSpec {
        name: format!("db{order}"),
        order,
        lowpass,
        highpass,
    })
}

/// Parses a comma-separated wavelet list such as `db1,db6,db8,db10`.
pub fn parse_wavelet_list(s: &str) -> Result<Vec<WaveletSpec>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Alternating-flip high-pass: `g[k] = (-1)^k h[L-1-k]`.
pub fn qmf_highpass(lowpass: &[f64]) -> Result<Vec<f64>> {
    let len = lowpass.len();
    if len == 0 || !len.is_multiple_of(2) {
        return Err(Error::OddFilterLength(len));
    }
    Ok((0..len)
        .map(|k| {
            let h = lowpass[len - 1 - k];
            if k % 2 == 0 {
                h
            } else {
                -h
            }
        })
        .collect())
}

/// Residuals of the five filter invariants. Each field is the worst absolute
/// deviation from the ideal value.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub sum_error: f64,
    pub energy_error: f64,
    pub orthogonality_error: f64,
    pub qmf_error: f64,
    pub moment_error: f64,
}

/// Neumaier summation; with the product error terms above the moment sums
/// are evaluated to within a few ulps of the largest term's rounding error.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

impl InvariantReport {
    pub const SUM_TOL: f64 = 1e-10;
    pub const ENERGY_TOL: f64 = 1e-10;
    pub const ORTHO_TOL: f64 = 1e-10;
    pub const MOMENT_TOL: f64 = 1e-8;

    fn evaluate(spec: &WaveletSpec) -> Self {
        let h = &spec.lowpass;
        let len = h.len();
        let sum_error = (h.iter().sum::<f64>() - std::f64::consts::SQRT_2).abs();
        let energy_error = (h.iter().map(|v| v * v).sum::<f64>() - 1.0).abs();

        let mut orthogonality_error = 0.0f64;
        for m in (2..len).step_by(2) {
            let dot: f64 = (0..len - m).map(|k| h[k] * h[k + m]).sum();
            orthogonality_error = orthogonality_error.max(dot.abs());
        }

        let qmf_error = match qmf_highpass(h) {
            Ok(g) if g.len() == spec.highpass.len() => g
                .iter()
                .zip(&spec.highpass)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        };

        let mut moment_error = 0.0f64;
        for p in 0..spec.order {
            let terms = h.iter().enumerate().flat_map(|(k, &hk)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let a = sign * (k as f64).powi(p as i32);
                let prod = a * hk;
                [prod, a.mul_add(hk, -prod)]
            });
            let moment = compensated_sum(terms);
            moment_error = moment_error.max(moment.abs());
        }

        InvariantReport {
            sum_error,
            energy_error,
            orthogonality_error,
            qmf_error,
            moment_error,
        }
    }

    pub fn passes(&self) -> bool {
        self.sum_error <= Self::SUM_TOL
            && self.energy_error <= Self::ENERGY_TOL
            && self.orthogonality_error <= Self::ORTHO_TOL
            && self.qmf_error == 0.0
            && self.moment_error <= Self::MOMENT_TOL
    }
}
