//! Confusion matrices, per-pair error rates, and their text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::emotion::Emotion;
use crate::error::{Error, Result};

const N: usize = Emotion::COUNT;

/// Counts indexed `[true][predicted]` in canonical label order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; N]; N],
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; N]; N]) -> Self {
        ConfusionMatrix { counts }
    }

    pub fn row_sum(&self, label: Emotion) -> u64 {
        self.counts[label.index()].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..N).map(|i| self.counts[i][i]).sum()
    }

    /// Row-normalized percentages; empty rows are `None`.
    pub fn row_percent(&self) -> [Option<[f64; N]>; N] {
        let mut out = [None; N];
        for (i, row) in self.counts.iter().enumerate() {
            let sum: u64 = row.iter().sum();
            if sum > 0 {
                let mut pct = [0.0; N];
                for (p, &c) in pct.iter_mut().zip(row) {
                    *p = 100.0 * c as f64 / sum as f64;
                }
                out[i] = Some(pct);
            }
        }
        out
    }
}

pub fn confusion(truth: &[Emotion], predicted: &[Emotion]) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            what: "true vs predicted labels",
            left: truth.len(),
            right: predicted.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (t, p) in truth.iter().zip(predicted) {
        cm.counts[t.index()][p.index()] += 1;
    }
    Ok(cm)
}

/// Builds a confusion matrix from label names, rejecting unknown labels.
pub fn confusion_from_names<S: AsRef<str>>(truth: &[S], predicted: &[S]) -> Result<ConfusionMatrix> {
    let parse = |v: &[S]| v.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<Emotion>>>();
    confusion(&parse(truth)?, &parse(predicted)?)
}

/// `100 * trace / total`.
pub fn overall_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    Ok(100.0 * cm.trace() as f64 / total as f64)
}

/// Unweighted mean of the diagonal row percentages over non-empty rows.
pub fn balanced_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let diag: Vec<f64> = cm
        .row_percent()
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| r[i]))
        .collect();
    if diag.is_empty() {
        return Err(Error::EmptyConfusion);
    }
    Ok(diag.iter().sum::<f64>() / diag.len() as f64)
}

/// Error percentage for each of the 21 label pairs, canonical pair order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseErrorTable {
    pub entries: Vec<((Emotion, Emotion), f64)>,
}

impl PairwiseErrorTable {
    pub fn get(&self, a: Emotion, b: Emotion) -> Option<f64> {
        self.entries
            .iter()
            .find(|((x, y), _)| (*x, *y) == (a, b) || (*x, *y) == (b, a))
            .map(|(_, e)| *e)
    }

    /// The pair with the highest error (first in canonical order on ties).
    pub fn worst(&self) -> Option<((Emotion, Emotion), f64)> {
        self.entries
            .iter()
            .copied()
            .fold(None, |best, cur| match best {
                Some((_, e)) if e >= cur.1 => best,
                _ => Some(cur),
            })
    }
}

/// Pooled cross-confusion:
/// `100 * (counts[A][B] + counts[B][A]) / (rows(A) + rows(B))`.
pub fn pairwise_errors(cm: &ConfusionMatrix) -> Result<PairwiseErrorTable> {
    let mut entries = Vec::with_capacity(21);
    for (a, b) in Emotion::pairs() {
        let denom = cm.row_sum(a) + cm.row_sum(b);
        if denom == 0 {
            return Err(Error::EmptyPair(crate::emotion::pair_name((a, b))));
        }
        let cross = cm.counts[a.index()][b.index()] + cm.counts[b.index()][a.index()];
        entries.push(((a, b), 100.0 * cross as f64 / denom as f64));
    }
    Ok(PairwiseErrorTable { entries })
}

/// Class-balanced cross-confusion: the mean of the two row percentages
/// `pct[A][B]` and `pct[B][A]` (an empty row is left out of the mean).
pub fn pairwise_errors_balanced(cm: &ConfusionMatrix) -> Result<PairwiseErrorTable> {
    let pct = cm.row_percent();
    let mut entries = Vec::with_capacity(21);
    for (a, b) in Emotion::pairs() {
        let parts: Vec<f64> = [
            pct[a.index()].map(|r| r[b.index()]),
            pct[b.index()].map(|r| r[a.index()]),
        ]
        .into_iter()
        .flatten()
        .collect();
        if parts.is_empty() {
            return Err(Error::EmptyPair(crate::emotion::pair_name((a, b))));
        }
        entries.push(((a, b), parts.iter().sum::<f64>() / parts.len() as f64));
    }
    Ok(PairwiseErrorTable { entries })
}

fn pct_cell(v: f64) -> String {
    format!("{v:05.2}%")
}

/// Row-percentage table: header of label names, one row per true label.
pub fn render_confusion(cm: &ConfusionMatrix) -> String {
    let mut out = String::from("Emotional states");
    for e in Emotion::ALL {
        out.push('\t');
        out.push_str(e.title());
    }
    out.push('\n');
    for (e, row) in Emotion::ALL.iter().zip(cm.row_percent()) {
        out.push_str(e.title());
        for k in 0..N {
            out.push('\t');
            match row {
                Some(r) => out.push_str(&pct_cell(r[k])),
                None => out.push('-'),
            }
        }
        out.push('\n');
    }
    out
}

/// Raw counts with the same layout as [`render_confusion`].
pub fn render_counts(cm: &ConfusionMatrix) -> String {
    let mut out = String::from("Emotional states");
    for e in Emotion::ALL {
        let _ = write!(out, "\t{}", e.title());
    }
    out.push('\n');
    for (e, row) in Emotion::ALL.iter().zip(&cm.counts) {
        out.push_str(e.title());
        for c in row {
            let _ = write!(out, "\t{c}");
        }
        out.push('\n');
    }
    out
}

pub fn render_pairwise(table: &PairwiseErrorTable) -> String {
    let mut out = String::from("Pair of emotional states\tError percentage\n");
    for ((a, b), e) in &table.entries {
        let _ = writeln!(out, "{} - {}\t{:.2}%", a.title(), b.title(), e);
    }
    out
}
