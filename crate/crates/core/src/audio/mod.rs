//! Corpus loading: WAV decoding, manifests and the synthetic generator.

mod manifest;
mod synth;
mod wav;

pub use manifest::{
    emodb_label, emodb_manifest, load_corpus, CorpusManifest, ManifestEntry, EMODB_SAMPLE_RATE,
};
pub use synth::{synth_corpus, write_corpus, AM_DEPTH, LEVEL_GAINS, SYNTH_LEVELS, SYNTH_SAMPLE_RATE};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav, WavData};

use crate::emotion::Emotion;

/// One labeled utterance, mono, samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub id: String,
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub label: Emotion,
}
