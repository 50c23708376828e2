use std::path::PathBuf;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported Daubechies order {0} (supported: 1, 6, 8, 10)")]
    UnsupportedOrder(usize),
    #[error("unknown wavelet name `{0}`")]
    UnknownWavelet(String),
    #[error("filter length must be even, got {0}")]
    OddFilterLength(usize),
    #[error("unknown boundary mode `{0}`")]
    UnknownBoundary(String),
    #[error("empty signal")]
    EmptySignal,
    #[error("signal of length {len} too short for {levels} levels (minimum length {min})")]
    SignalTooShort { len: usize, levels: usize, min: usize },
    #[error("decomposition depth must be at least 1")]
    ZeroLevels,
    #[error("length mismatch: {what} ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
    #[error("packet-mode trees cannot be reconstructed")]
    PacketReconstruct,
    #[error("periodic boundary requires an even-length signal, got {0}")]
    OddPeriodicLength(usize),

    #[error("{path}: unsupported encoding (format tag {tag:#06x}, only PCM is accepted)")]
    UnsupportedEncoding { path: PathBuf, tag: u16 },
    #[error("{path}: unsupported bit depth {bits} (only 16-bit PCM is accepted)")]
    UnsupportedBitDepth { path: PathBuf, bits: u16 },
    #[error("{path}: unsupported channel count {channels}")]
    UnsupportedChannels { path: PathBuf, channels: u16 },
    #[error("{path}: truncated file ({detail})")]
    TruncatedWav { path: PathBuf, detail: String },
    #[error("{path}: not a RIFF/WAVE file ({detail})")]
    NotWav { path: PathBuf, detail: String },

    #[error("empty manifest")]
    EmptyManifest,
    #[error("manifest line {line}: {detail}")]
    ManifestSyntax { line: usize, detail: String },
    #[error("unknown emotion label `{0}`")]
    UnknownLabel(String),
    #[error("missing file for manifest entry `{0}`")]
    MissingFile(PathBuf),
    #[error("sample rate mismatch (expected {expected} Hz): {deviants}")]
    RateMismatch { expected: u32, deviants: String },
    #[error("label `{label}` has {count} rows, at least {needed} required")]
    InsufficientRows {
        label: String,
        count: usize,
        needed: usize,
    },
    #[error("sample needs at least 2 elements, got {0}")]
    SampleTooSmall(usize),
    #[error("pair {pair}: fewer than 2 usable features")]
    NotEnoughFeatures { pair: String },
    #[error("feature `{0}` not present in matrix")]
    MissingFeature(String),
    #[error("recording `{id}`: {source}")]
    Recording {
        id: String,
        #[source]
        source: Box<Error>,
    },
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty confusion matrix")]
    EmptyConfusion,
    #[error("both rows of pair {0} are empty")]
    EmptyPair(String),
    #[error("parameter file was trained for a different selection schema (expected {expected}, found {found})")]
    SchemaHashMismatch { expected: String, found: String },
    #[error("{0}")]
    Format(String),

    #[error("training diverged at epoch {epoch} (loss {loss}); try a smaller learning_rate")]
    Divergence { epoch: usize, loss: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit code classes used by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Usage = 1,
    Data = 2,
    Divergence = 3,
}

impl Error {
    /// Attach a pipeline stage name.
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Stage { source, .. } | Error::Recording { source, .. } => source.exit_class(),
            Error::Divergence { .. } => ExitClass::Divergence,
            Error::Config(_) | Error::UnsupportedOrder(_) | Error::UnknownWavelet(_) | Error::UnknownBoundary(_) => {
                ExitClass::Usage
            }
            _ => ExitClass::Data,
        }
    }
}
