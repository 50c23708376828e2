use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::audio::wav::read_wav;
use crate::audio::Recording;
use crate::emotion::Emotion;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the manifest root.
    pub path: PathBuf,
    pub label: Emotion,
}

/// Describes a labeled corpus on disk.
///
/// Text form: a `rate=<Hz>` header followed by `<relative-path>\t<label>` lines.
/// Blank lines and lines starting with `#` are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub root_path: PathBuf,
    pub entries: Vec<ManifestEntry>,
    pub expected_sample_rate: u32,
}

impl CorpusManifest {
    /// Parses manifest text; relative paths resolve against `root_path`.
    pub fn parse(text: &str, root_path: impl Into<PathBuf>) -> Result<Self> {
        let mut rate = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            if rate.is_none() {
                let value = line
                    .trim()
                    .strip_prefix("rate=")
                    .ok_or_else(|| Error::ManifestSyntax {
                        line: line_no,
                        detail: "expected `rate=<Hz>` header".into(),
                    })?;
                let hz: u32 = value.trim().parse().map_err(|_| Error::ManifestSyntax {
                    line: line_no,
                    detail: format!("invalid sample rate `{value}`"),
                })?;
                rate = Some(hz);
                continue;
            }
            let (path, label) = line.split_once('\t').ok_or_else(|| Error::ManifestSyntax {
                line: line_no,
                detail: "expected `<path>\\t<label>`".into(),
            })?;
            let label: Emotion = label.parse().map_err(|_| Error::ManifestSyntax {
                line: line_no,
                detail: format!("unknown emotion label `{}`", label.trim()),
            })?;
            entries.push(ManifestEntry {
                path: PathBuf::from(path),
                label,
            });
        }
        let expected_sample_rate = rate.ok_or(Error::EmptyManifest)?;
        Ok(CorpusManifest {
            root_path: root_path.into(),
            entries,
            expected_sample_rate,
        })
    }

    /// Reads a manifest file; entries resolve relative to its directory.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, root)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rate={}\n", self.expected_sample_rate);
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}", e.path.display(), e.label);
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Number of entries per label, in canonical label order.
    pub fn label_counts(&self) -> [usize; Emotion::COUNT] {
        let mut counts = [0; Emotion::COUNT];
        for e in &self.entries {
            counts[e.label.index()] += 1;
        }
        counts
    }
}

/// Loads every manifest entry, in manifest order.
pub fn load_corpus(manifest: &CorpusManifest) -> Result<Vec<Recording>> {
    if manifest.entries.is_empty() {
        return Err(Error::EmptyManifest);
    }
    for e in &manifest.entries {
        if !manifest.root_path.join(&e.path).is_file() {
            return Err(Error::MissingFile(e.path.clone()));
        }
    }
    let loaded: Vec<Result<Recording>> = manifest
        .entries
        .par_iter()
        .map(|e| {
            let full = manifest.root_path.join(&e.path);
            let wav = read_wav(&full)?;
            let id = e
                .path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| e.path.display().to_string());
            if wav.samples.is_empty() {
                return Err(Error::Recording {
                    id,
                    source: Box::new(Error::EmptySignal),
                });
            }
            Ok(Recording {
                id,
                samples: wav.samples,
                sample_rate: wav.sample_rate,
                label: e.label,
            })
        })
        .collect();
    let recordings = loaded.into_iter().collect::<Result<Vec<_>>>()?;

    let deviants: Vec<String> = manifest
        .entries
        .iter()
        .zip(&recordings)
        .filter(|(_, r)| r.sample_rate != manifest.expected_sample_rate)
        .map(|(e, r)| format!("{} ({} Hz)", e.path.display(), r.sample_rate))
        .collect();
    if !deviants.is_empty() {
        return Err(Error::RateMismatch {
            expected: manifest.expected_sample_rate,
            deviants: deviants.join(", "),
        });
    }
    Ok(recordings)
}

/// Emo-DB encodes the emotion as the sixth character of the file name
/// (e.g. `03a01Fa.wav`), using German initials.
pub fn emodb_label(file_name: &str) -> Option<Emotion> {
    match file_name.chars().nth(5)? {
        'W' => Some(Emotion::Anger),
        'L' => Some(Emotion::Boredom),
        'E' => Some(Emotion::Disgust),
        'A' => Some(Emotion::Anxiety),
        'F' => Some(Emotion::Happiness),
        'T' => Some(Emotion::Sadness),
        'N' => Some(Emotion::Neutral),
        _ => None,
    }
}

/// Emo-DB is distributed at 16 kHz.
pub const EMODB_SAMPLE_RATE: u32 = 16_000;

/// Builds a manifest for an Emo-DB `wav/` directory. Files are listed in
/// name order; names that do not follow the Emo-DB scheme are skipped.
pub fn emodb_manifest(dir: impl AsRef<Path>) -> Result<CorpusManifest> {
    let dir = dir.as_ref();
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.to_ascii_lowercase().ends_with(".wav"))
        .collect();
    names.sort();
    let entries = names
        .into_iter()
        .filter_map(|n| {
            emodb_label(&n).map(|label| ManifestEntry {
                path: PathBuf::from(n),
                label,
            })
        })
        .collect();
    Ok(CorpusManifest {
        root_path: dir.to_path_buf(),
        entries,
        expected_sample_rate: EMODB_SAMPLE_RATE,
    })
}
