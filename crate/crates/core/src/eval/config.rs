//! Run configuration: a TOML key-value file whose fields can be overridden
//! individually from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifier::TrainConfig;
use crate::error::{Error, Result};
use crate::wavelet::{parse_wavelet_list, WaveletSpec};

pub const DEFAULT_WAVELETS: &str = "db1,db6,db8,db10";
pub const DEFAULT_LEVELS: usize = 10;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

/// Every field optional; merged from a file and from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub manifest: Option<PathBuf>,
    pub synth_seed: Option<u64>,
    pub synth_per_class: Option<usize>,
    pub synth_length: Option<usize>,
    pub wavelets: Option<String>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
    pub test_fraction: Option<f64>,
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub batch_size: Option<usize>,
    pub max_epochs: Option<usize>,
    pub patience: Option<usize>,
    pub validation_fraction: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            manifest, synth_seed, synth_per_class, synth_length, wavelets, levels, seed,
            test_fraction, learning_rate, momentum, batch_size, max_epochs, patience,
            validation_fraction, output_dir
        )
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| missing("seed"))
    }

    pub fn wavelet_specs(&self) -> Result<Vec<WaveletSpec>> {
        let list = parse_wavelet_list(self.wavelets.as_deref().unwrap_or(DEFAULT_WAVELETS))?;
        if list.is_empty() {
            return Err(Error::Config("wavelets: empty list".into()));
        }
        Ok(list)
    }

    pub fn levels(&self) -> Result<usize> {
        let levels = self.levels.unwrap_or(DEFAULT_LEVELS);
        if levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        Ok(levels)
    }

    pub fn test_fraction(&self) -> Result<f64> {
        let f = self.test_fraction.unwrap_or(DEFAULT_TEST_FRACTION);
        if !(f > 0.0 && f < 0.5) {
            return Err(Error::Config(format!("test_fraction must be in (0, 0.5), got {f}")));
        }
        Ok(f)
    }

    pub fn source(&self) -> Result<CorpusSource> {
        if let Some(m) = &self.manifest {
            return Ok(CorpusSource::Manifest(m.clone()));
        }
        match (self.synth_per_class, self.synth_length) {
            (Some(per_class), Some(length)) => Ok(CorpusSource::Synth {
                seed: self.synth_seed.or(self.seed).ok_or_else(|| missing("synth_seed"))?,
                per_class,
                length,
            }),
            (None, None) => Err(missing("manifest (or synth_per_class and synth_length)")),
            (None, _) => Err(missing("synth_per_class")),
            (_, None) => Err(missing("synth_length")),
        }
    }

    pub fn train_config(&self) -> Result<TrainConfig> {
        let d = TrainConfig::default();
        let cfg = TrainConfig {
            seed: self.seed()?,
            learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
            momentum: self.momentum.unwrap_or(d.momentum),
            batch_size: self.batch_size.unwrap_or(d.batch_size),
            max_epochs: self.max_epochs.unwrap_or(d.max_epochs),
            patience: self.patience.unwrap_or(d.patience),
            validation_fraction: self.validation_fraction.unwrap_or(d.validation_fraction),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Validates everything needed for a full run.
    pub fn run_config(&self) -> Result<RunConfig> {
        Ok(RunConfig {
            source: self.source()?,
            wavelets: self.wavelet_specs()?,
            levels: self.levels()?,
            split_seed: self.seed()?,
            test_fraction: self.test_fraction()?,
            train: self.train_config()?,
            output_dir: self.output_dir.clone().ok_or_else(|| missing("output_dir"))?,
        })
    }
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing field: {field}"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    Manifest(PathBuf),
    Synth {
        seed: u64,
        per_class: usize,
        length: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: CorpusSource,
    pub wavelets: Vec<WaveletSpec>,
    pub levels: usize,
    pub split_seed: u64,
    pub test_fraction: f64,
    pub train: TrainConfig,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// The synthetic acceptance setup: 7 classes x `per_class` x `length`.
    pub fn synthetic(seed: u64, per_class: usize, length: usize, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            source: CorpusSource::Synth {
                seed,
                per_class,
                length,
            },
            wavelets: parse_wavelet_list(DEFAULT_WAVELETS).expect("default wavelets"),
            levels: DEFAULT_LEVELS,
            split_seed: seed,
            test_fraction: DEFAULT_TEST_FRACTION,
            train: TrainConfig {
                seed,
                ..TrainConfig::default()
            },
            output_dir: output_dir.into(),
        }
    }
}
