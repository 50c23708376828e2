//! Shared fixtures and independent reference implementations for the
//! integration tests.
#![allow(dead_code)]

use emowave::features::{FeatureMatrix, FeatureRow};
use emowave::Emotion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Full circular convolution `y[m] = sum_k f[k] x[(m + k) mod n]`, then keep
/// the even-indexed outputs.
pub fn conv_decimate(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let full: Vec<f64> = (0..n)
        .map(|m| f.iter().enumerate().map(|(k, fk)| fk * x[(m + k) % n]).sum())
        .collect();
    full.into_iter().step_by(2).collect()
}

/// Reference Mallat cascade on an already padded signal: `[D1..DJ, AJ]`.
pub fn cascade(x: &[f64], h: &[f64], g: &[f64], levels: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut a = x.to_vec();
    for _ in 0..levels {
        out.push(conv_decimate(&a, g));
        a = conv_decimate(&a, h);
    }
    out.push(a);
    out
}

/// Double-double accumulation of `sum_i a_i * b_i`.
pub fn dot_dd(a: &[f64], b: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        let pe = x.mul_add(y, -p);
        let s = hi + p;
        let bb = s - hi;
        let se = (hi - (s - bb)) + (p - bb);
        hi = s;
        lo += se + pe;
    }
    hi + lo
}

/// Two-sided Student t tail by Simpson integration after `x = sqrt(v) tan(theta)`.
pub fn p_oracle(t: f64, dof: f64) -> f64 {
    let f = |th: f64| th.cos().powf(dof - 1.0);
    let simpson = |a: f64, b: f64| {
        let n = 200_000;
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let half = std::f64::consts::FRAC_PI_2;
    simpson((t.abs() / dof.sqrt()).atan(), half) / simpson(0.0, half)
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn pop_std(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64).sqrt()
}

/// A matrix with `per_class` rows per label whose values come from `f`.
pub fn matrix_from<F>(names: &[&str], per_class: usize, mut f: F) -> FeatureMatrix
where
    F: FnMut(Emotion, usize) -> Vec<f64>,
{
    let mut rows = Vec::new();
    for label in Emotion::ALL {
        for i in 0..per_class {
            rows.push(FeatureRow {
                id: format!("{label}_{i:02}"),
                label,
                values: f(label, i),
            });
        }
    }
    FeatureMatrix {
        feature_names: names.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

/// Confusion counts consistent with every printed percentage of the published
/// seven-class table (rows are true labels, canonical label order).
pub const PUBLISHED_COUNTS: [[u64; 7]; 7] = [
    [70, 0, 0, 1, 5, 1, 1],
    [1, 41, 2, 0, 1, 0, 0],
    [0, 2, 60, 2, 1, 5, 0],
    [1, 1, 1, 64, 2, 0, 0],
    [5, 0, 0, 2, 73, 0, 0],
    [0, 1, 6, 2, 0, 117, 0],
    [1, 0, 0, 1, 2, 0, 56],
];

/// The published row-percentage table.
pub const PUBLISHED_TABLE: [[f64; 7]; 7] = [
    [89.74, 0.00, 0.00, 1.28, 6.41, 1.28, 1.28],
    [2.22, 91.11, 4.44, 0.00, 2.22, 0.00, 0.00],
    [0.00, 2.86, 85.71, 2.86, 1.43, 7.14, 0.00],
    [1.45, 1.45, 1.45, 92.75, 2.90, 0.00, 0.00],
    [6.25, 0.00, 0.00, 2.50, 91.25, 0.00, 0.00],
    [0.00, 0.79, 4.76, 1.59, 0.00, 92.86, 0.00],
    [1.67, 0.00, 0.00, 1.67, 3.33, 0.00, 93.33],
];
