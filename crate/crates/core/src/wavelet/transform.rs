//! Periodic Mallat cascade and wavelet-packet trees.
//!
//! One level of analysis computes
//!
//! ```text
//! approx[n] = sum_k h[k] * x[(2n + k) mod L]
//! detail[n] = sum_k g[k] * x[(2n + k) mod L]
//! ```
//!
//! and synthesis is its transpose. With an orthonormal filter pair this is an
//! orthogonal map, so energy is preserved and synthesis inverts analysis exactly
//! up to rounding.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::wavelet::filters::WaveletSpec;

/// Signal extension used at the borders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryMode {
    #[default]
    Periodic,
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Periodic => "periodic",
        }
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" | "periodization" | "per" => Ok(BoundaryMode::Periodic),
            _ => Err(Error::UnknownBoundary(s.to_string())),
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubbandKind {
    Approximation,
    Detail,
    /// Wavelet-packet node; `index` is its position among the `2^level` nodes
    /// of its level (even children are low-pass, odd are high-pass).
    Packet { index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subband {
    pub level: usize,
    pub kind: SubbandKind,
    pub coefficients: Vec<f64>,
}

impl Subband {
    /// `D3`, `A10`, or `P3.5` for packet nodes.
    pub fn label(&self) -> String {
        match self.kind {
            SubbandKind::Approximation => format!("A{}", self.level),
            SubbandKind::Detail => format!("D{}", self.level),
            SubbandKind::Packet { index } => format!("P{}.{}", self.level, index),
        }
    }

    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Dwt,
    Packet,
}

/// All subbands of one signal's decomposition.
///
/// In DWT mode `subbands` is `[D1, D2, .., DJ, AJ]`; in packet mode it holds
/// the `2^J` leaves of level `J` in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTree {
    pub wavelet: String,
    pub levels: usize,
    pub boundary: BoundaryMode,
    pub mode: TreeMode,
    pub original_length: usize,
    pub padded_length: usize,
    pub subbands: Vec<Subband>,
}

impl DecompositionTree {
    pub fn subband(&self, label: &str) -> Option<&Subband> {
        self.subbands.iter().find(|s| s.label() == label)
    }

    pub fn energy(&self) -> f64 {
        self.subbands.iter().map(Subband::energy).sum()
    }
}

/// One level of the filter bank. Returns `(approx, detail)`, each half as long
/// as `signal`.
pub fn analysis_step(
    signal: &[f64],
    spec: &WaveletSpec,
    boundary: BoundaryMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = signal.len();
    if len == 0 {
        return Err(Error::EmptySignal);
    }
    match boundary {
        BoundaryMode::Periodic => {
            if !len.is_multiple_of(2) {
                return Err(Error::OddPeriodicLength(len));
            }
        }
    }
    let half = len / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for n in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        let base = 2 * n;
        for (k, (&h, &g)) in spec.lowpass.iter().zip(&spec.highpass).enumerate() {
            let x = signal[(base + k) % len];
            a += h * x;
            d += g * x;
        }
        approx[n] = a;
        detail[n] = d;
    }
    Ok((approx, detail))
}

/// Inverse of [`analysis_step`].
pub fn synthesis_step(
    approx: &[f64],
    detail: &[f64],
    spec: &WaveletSpec,
    boundary: BoundaryMode,
) -> Result<Vec<f64>> {
    if approx.len() != detail.len() {
        return Err(Error::LengthMismatch {
            what: "approximation and detail",
            left: approx.len(),
            right: detail.len(),
        });
    }
    if approx.is_empty() {
        return Err(Error::EmptySignal);
    }
    let BoundaryMode::Periodic = boundary;
    let len = 2 * approx.len();
    let mut out = vec![0.0; len];
    for (n, (&a, &d)) in approx.iter().zip(detail).enumerate() {
        let base = 2 * n;
        for (k, (&h, &g)) in spec.lowpass.iter().zip(&spec.highpass).enumerate() {
            out[(base + k) % len] += h * a + g * d;
        }
    }
    Ok(out)
}

/// Checks the depth and zero-pads the signal to a multiple of `2^levels`.
fn padded(signal: &[f64], levels: usize) -> Result<Vec<f64>> {
    if levels == 0 {
        return Err(Error::ZeroLevels);
    }
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let block = 1usize
        .checked_shl(levels as u32)
        .filter(|b| *b > 0)
        .ok_or(Error::SignalTooShort {
            len: signal.len(),
            levels,
            min: usize::MAX,
        })?;
    if signal.len() < block {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            levels,
            min: block,
        });
    }
    let target = signal.len().div_ceil(block) * block;
    let mut out = signal.to_vec();
    out.resize(target, 0.0);
    Ok(out)
}

/// Multi-level DWT: `levels` analysis steps on the approximation branch.
///
/// The input must hold at least `2^levels` samples; it is zero-padded to the
/// next multiple of `2^levels`.
pub fn decompose(signal: &[f64], spec: &WaveletSpec, levels: usize) -> Result<DecompositionTree> {
    let boundary = BoundaryMode::Periodic;
    let mut current = padded(signal, levels)?;
    let padded_length = current.len();
    let mut subbands = Vec::with_capacity(levels + 1);
    for level in 1..=levels {
        let (approx, detail) = analysis_step(&current, spec, boundary)?;
        subbands.push(Subband {
            level,
            kind: SubbandKind::Detail,
            coefficients: detail,
        });
        current = approx;
    }
    subbands.push(Subband {
        level: levels,
        kind: SubbandKind::Approximation,
        coefficients: current,
    });
    Ok(DecompositionTree {
        wavelet: spec.name.clone(),
        levels,
        boundary,
        mode: TreeMode::Dwt,
        original_length: signal.len(),
        padded_length,
        subbands,
    })
}

/// Full wavelet-packet tree: both branches are split at every level.
pub fn packet_decompose(
    signal: &[f64],
    spec: &WaveletSpec,
    levels: usize,
) -> Result<DecompositionTree> {
    let boundary = BoundaryMode::Periodic;
    let root = padded(signal, levels)?;
    let padded_length = root.len();
    let mut nodes = vec![root];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(nodes.len() * 2);
        for node in &nodes {
            let (approx, detail) = analysis_step(node, spec, boundary)?;
            next.push(approx);
            next.push(detail);
        }
        nodes = next;
    }
    let subbands = nodes
        .into_iter()
        .enumerate()
        .map(|(index, coefficients)| Subband {
            level: levels,
            kind: SubbandKind::Packet { index },
            coefficients,
        })
        .collect();
    Ok(DecompositionTree {
        wavelet: spec.name.clone(),
        levels,
        boundary,
        mode: TreeMode::Packet,
        original_length: signal.len(),
        padded_length,
        subbands,
    })
}

/// Inverts a DWT-mode tree, returning `original_length` samples.
pub fn reconstruct(tree: &DecompositionTree) -> Result<Vec<f64>> {
    if tree.mode == TreeMode::Packet {
        return Err(Error::PacketReconstruct);
    }
    if tree.subbands.len() != tree.levels + 1 {
        return Err(Error::LengthMismatch {
            what: "subband count vs levels + 1",
            left: tree.subbands.len(),
            right: tree.levels + 1,
        });
    }
    let spec: WaveletSpec = tree.wavelet.parse()?;
    let mut current = tree.subbands[tree.levels].coefficients.clone();
    for detail in tree.subbands[..tree.levels].iter().rev() {
        current = synthesis_step(&current, &detail.coefficients, &spec, tree.boundary)?;
    }
    if current.len() < tree.original_length {
        return Err(Error::LengthMismatch {
            what: "reconstructed vs original length",
            left: current.len(),
            right: tree.original_length,
        });
    }
    current.truncate(tree.original_length);
    Ok(current)
}

/// Writes a tree as text: a `#` header line, then one
/// `<label>\t<length>\t<coefficients...>` line per subband.
pub fn dump_tree<W: Write>(tree: &DecompositionTree, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "# wavelet={} levels={} boundary={} mode={} original_length={} padded_length={}",
        tree.wavelet,
        tree.levels,
        tree.boundary,
        match tree.mode {
            TreeMode::Dwt => "dwt",
            TreeMode::Packet => "packet",
        },
        tree.original_length,
        tree.padded_length
    )?;
    for band in &tree.subbands {
        write!(out, "{}\t{}\t", band.label(), band.coefficients.len())?;
        for (i, c) in band.coefficients.iter().enumerate() {
            if i > 0 {
                out.write_all(b" ")?;
            }
            write!(out, "{c:e}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}
