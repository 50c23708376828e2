//! Subband statistics over multi-level decompositions, collected into a
//! named feature matrix.
//!
//! Feature names have the form `<wavelet>.<subband>.<stat>`, e.g.
//! `db6.D3.kurtosis` or `db1.A10.mean`.

mod stats;

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::audio::Recording;
use crate::emotion::Emotion;
use crate::error::{Error, Result};
use crate::wavelet::{decompose, WaveletSpec};

pub use stats::{quantile_sorted, subband_stats, zero_crossing_rate, SubbandStats, STAT_NAMES};

/// Subband labels in decomposition order: `D1..DJ, AJ`.
pub fn subband_labels(levels: usize) -> Vec<String> {
    (1..=levels)
        .map(|j| format!("D{j}"))
        .chain(std::iter::once(format!("A{levels}")))
        .collect()
}

/// The full ordered feature-name list for a wavelet set and depth.
pub fn feature_names(wavelets: &[WaveletSpec], levels: usize) -> Vec<String> {
    let bands = subband_labels(levels);
    let mut names = Vec::with_capacity(wavelets.len() * bands.len() * STAT_NAMES.len());
    for w in wavelets {
        for b in &bands {
            for s in STAT_NAMES {
                names.push(format!("{}.{}.{}", w.name, b, s));
            }
        }
    }
    names
}

/// One recording's features, aligned with [`feature_names`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    /// Indices of shape statistics zeroed because their subband had no variance.
    pub degenerate: Vec<usize>,
}

pub fn extract_recording(
    rec: &Recording,
    wavelets: &[WaveletSpec],
    levels: usize,
) -> Result<FeatureVector> {
    let mut values = Vec::with_capacity(wavelets.len() * (levels + 1) * STAT_NAMES.len());
    let mut degenerate = Vec::new();
    for w in wavelets {
        let tree = decompose(&rec.samples, w, levels)?;
        for band in &tree.subbands {
            let s = subband_stats(&band.coefficients)?;
            if s.degenerate {
                // kurtosis and skewness are the last two stats
                degenerate.push(values.len() + 6);
                degenerate.push(values.len() + 7);
            }
            values.extend_from_slice(&s.values());
        }
    }
    Ok(FeatureVector { values, degenerate })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub label: Emotion,
    pub values: Vec<f64>,
}

/// Rectangular table of named features, one row per recording.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

/// A shape statistic that was zeroed during extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateFeature {
    pub id: String,
    pub feature: String,
}

pub fn extract_corpus(
    corpus: &[Recording],
    wavelets: &[WaveletSpec],
    levels: usize,
) -> Result<FeatureMatrix> {
    extract_corpus_logged(corpus, wavelets, levels).map(|(m, _)| m)
}

/// Like [`extract_corpus`], also returning every degenerate shape statistic.
pub fn extract_corpus_logged(
    corpus: &[Recording],
    wavelets: &[WaveletSpec],
    levels: usize,
) -> Result<(FeatureMatrix, Vec<DegenerateFeature>)> {
    if corpus.is_empty() {
        return Err(Error::Config("empty corpus".into()));
    }
    let feature_names = feature_names(wavelets, levels);
    let vectors = corpus
        .par_iter()
        .map(|rec| {
            extract_recording(rec, wavelets, levels).map_err(|e| Error::Recording {
                id: rec.id.clone(),
                source: Box::new(e),
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut log = Vec::new();
    let mut rows = Vec::with_capacity(corpus.len());
    for (rec, fv) in corpus.iter().zip(vectors) {
        log.extend(fv.degenerate.iter().map(|&i| DegenerateFeature {
            id: rec.id.clone(),
            feature: feature_names[i].clone(),
        }));
        rows.push(FeatureRow {
            id: rec.id.clone(),
            label: rec.label,
            values: fv.values,
        });
    }
    Ok((FeatureMatrix { feature_names, rows }, log))
}

impl FeatureMatrix {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.values[index]).collect()
    }

    /// Values of one column restricted to rows with `label`.
    pub fn column_for(&self, index: usize, label: Emotion) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.label == label)
            .map(|r| r.values[index])
            .collect()
    }

    pub fn label_counts(&self) -> [usize; Emotion::COUNT] {
        let mut counts = [0; Emotion::COUNT];
        for r in &self.rows {
            counts[r.label.index()] += 1;
        }
        counts
    }

    /// Errors unless every label in `labels` has at least `needed` rows.
    pub fn require_rows(&self, labels: &[Emotion], needed: usize) -> Result<()> {
        let counts = self.label_counts();
        for &l in labels {
            if counts[l.index()] < needed {
                return Err(Error::InsufficientRows {
                    label: l.to_string(),
                    count: counts[l.index()],
                    needed,
                });
            }
        }
        Ok(())
    }

    /// New matrix holding the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Writes `id,label,<features...>` CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(self.n_features() + 2);
        header.push("id".to_string());
        header.push("label".to_string());
        header.extend(self.feature_names.iter().cloned());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = Vec::with_capacity(header.len());
            rec.push(row.id.clone());
            rec.push(row.label.to_string());
            rec.extend(row.values.iter().map(|v| format!("{v:.16e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<FeatureMatrix> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 2 || &header[0] != "id" || &header[1] != "label" {
            return Err(Error::Format("feature CSV must start with `id,label`".into()));
        }
        let feature_names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let label: Emotion = rec[1].parse()?;
            let values = rec
                .iter()
                .skip(2)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::Format(format!("row {}: bad number `{v}`", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(FeatureRow {
                id: rec[0].to_string(),
                label,
                values,
            });
        }
        Ok(FeatureMatrix {
            feature_names,
            rows,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        crate::io_util::write_atomic(path, &buf)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::daubechies_filter;

    fn default_wavelets() -> Vec<WaveletSpec> {
        [1, 6, 8, 10].iter().map(|&o| daubechies_filter(o).unwrap()).collect()
    }

    fn rec(samples: Vec<f64>) -> Recording {
        Recording {
            id: "r".into(),
            samples,
            sample_rate: 16000,
            label: Emotion::Neutral,
        }
    }

    #[test]
    fn names_and_count() {
        let names = feature_names(&default_wavelets(), 10);
        assert_eq!(names.len(), 352);
        assert_eq!(names[0], "db1.D1.absmax");
        assert_eq!(names[351], "db10.A10.skewness");
        assert!(names.contains(&"db6.D3.kurtosis".to_string()));
    }

    #[test]
    fn constant_signal_has_no_detail() {
        let wavelets = default_wavelets();
        let fv = extract_recording(&rec(vec![0.25; 1024]), &wavelets, 10).unwrap();
        let names = feature_names(&wavelets, 10);
        assert_eq!(fv.values.len(), 352);
        for (n, v) in names.iter().zip(&fv.values) {
            if n.contains(".D") && n.ends_with(".absmax") {
                assert!(v.abs() < 1e-12, "{n} = {v}");
            }
        }
        assert!(!fv.degenerate.is_empty());
    }

    #[test]
    fn too_short_recording_propagates() {
        let corpus = vec![rec(vec![0.1; 100])];
        let err = extract_corpus(&corpus, &default_wavelets(), 10).unwrap_err();
        assert!(err.to_string().starts_with("recording `r`"), "{err}");
    }
}
