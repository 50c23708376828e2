//! The eight per-subband statistics.
//!
//! Conventions:
//! - `absmax` is the largest absolute coefficient.
//! - `std`, skewness (`m3 / m2^1.5`) and kurtosis (`m4 / m2^2`, not excess) use
//!   population moments. When the variance vanishes both shape statistics are 0
//!   and the result is marked degenerate.
//! - `median` and `iqr` use linear interpolation at zero-based position
//!   `p * (n - 1)` of the sorted sample.
//! - `zcr` counts strict sign changes between consecutive samples, zeros
//!   inheriting the previous sign, divided by `n - 1`.

use crate::error::{Error, Result};

pub const STAT_NAMES: [&str; 8] = [
    "absmax", "mean", "median", "iqr", "std", "zcr", "kurtosis", "skewness",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubbandStats {
    pub absmax: f64,
    pub mean: f64,
    pub median: f64,
    pub iqr: f64,
    pub std: f64,
    pub zcr: f64,
    pub kurtosis: f64,
    pub skewness: f64,
    /// Variance was zero; kurtosis and skewness were set to 0.
    pub degenerate: bool,
}

impl SubbandStats {
    /// Values in [`STAT_NAMES`] order.
    pub fn values(&self) -> [f64; 8] {
        [
            self.absmax,
            self.mean,
            self.median,
            self.iqr,
            self.std,
            self.zcr,
            self.kurtosis,
            self.skewness,
        ]
    }
}

/// Linear-interpolation quantile of an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn zero_crossing_rate(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let mut prev: Option<bool> = None;
    let mut changes = 0usize;
    for &v in x {
        let sign = if v > 0.0 {
            Some(true)
        } else if v < 0.0 {
            Some(false)
        } else {
            prev
        };
        if let (Some(p), Some(s)) = (prev, sign) {
            if p != s {
                changes += 1;
            }
        }
        prev = sign;
    }
    changes as f64 / (x.len() - 1) as f64
}

pub fn subband_stats(coeffs: &[f64]) -> Result<SubbandStats> {
    if coeffs.is_empty() {
        return Err(Error::EmptySignal);
    }
    let n = coeffs.len() as f64;
    let absmax = coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mean = coeffs.iter().sum::<f64>() / n;

    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in coeffs {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    // Rounding in the mean leaves a tiny nonzero m2 for constant input.
    let degenerate = m2 == 0.0 || m2.sqrt() <= 1e-12 * absmax;
    let (std, skewness, kurtosis) = if degenerate {
        (0.0, 0.0, 0.0)
    } else {
        (m2.sqrt(), m3 / m2.powf(1.5), m4 / (m2 * m2))
    };

    let mut sorted = coeffs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = quantile_sorted(&sorted, 0.5);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);

    Ok(SubbandStats {
        absmax,
        mean,
        median,
        iqr,
        std,
        zcr: zero_crossing_rate(coeffs),
        kurtosis,
        skewness,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three_points() {
        let s = subband_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.median, 2.0);
        assert!((s.std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.absmax, 3.0);
        assert_eq!(s.skewness, 0.0);
        assert!(!s.degenerate);
    }

    #[test]
    fn alternating_signs() {
        let s = subband_stats(&[-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert_eq!(s.zcr, 1.0);
        assert_eq!(s.kurtosis, 1.0);
        assert_eq!(s.mean, 0.0);
    }

    #[test]
    fn constant_is_degenerate() {
        let s = subband_stats(&[5.0; 4]).unwrap();
        assert_eq!((s.std, s.skewness, s.kurtosis, s.zcr), (0.0, 0.0, 0.0, 0.0));
        assert!(s.degenerate);
        // 0.1 does not survive summation exactly.
        let s = subband_stats(&[0.1; 3]).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.kurtosis, 0.0);
    }

    #[test]
    fn iqr_linear_interpolation() {
        let s = subband_stats(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.iqr, 1.5);
        assert_eq!(s.median, 2.5);
    }

    #[test]
    fn zeros_inherit_previous_sign() {
        assert_eq!(zero_crossing_rate(&[1.0, 0.0, 0.0, 1.0]), 0.0);
        assert_eq!(zero_crossing_rate(&[1.0, 0.0, -1.0]), 0.5);
        assert_eq!(zero_crossing_rate(&[0.0, 0.0, -1.0, 2.0]), 1.0 / 3.0);
        assert_eq!(zero_crossing_rate(&[3.0]), 0.0);
    }

    #[test]
    fn single_coefficient() {
        let s = subband_stats(&[-2.5]).unwrap();
        assert_eq!((s.absmax, s.mean, s.median, s.iqr), (2.5, -2.5, -2.5, 0.0));
        assert!(s.degenerate);
        assert!(subband_stats(&[]).is_err());
    }
}
