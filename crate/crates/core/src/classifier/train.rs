use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::{gradient, loss, Example, NetworkParams, HIDDEN, OUTPUTS};
use crate::emotion::Emotion;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::select::SelectionSchema;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seed: u64,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub validation_fraction: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 16,
            max_epochs: 500,
            patience: 25,
            validation_fraction: 0.15,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config("momentum must be in [0, 1)".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::Config("validation_fraction must be in (0, 1)".into()));
        }
        if self.patience < 1 {
            return Err(Error::Config("patience must be at least 1".into()));
        }
        if self.batch_size < 1 || self.max_epochs < 1 {
            return Err(Error::Config("batch_size and max_epochs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    /// Epoch 0 holds the losses of the initial parameters.
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub config: TrainConfig,
    pub epochs: Vec<EpochLog>,
    pub best_epoch: usize,
    pub train_ids: Vec<String>,
    pub validation_ids: Vec<String>,
}

impl TrainingLog {
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "# seed={} learning_rate={} momentum={} batch_size={} max_epochs={} patience={} validation_fraction={} best_epoch={}\nepoch,train_loss,val_loss\n",
            c.seed, c.learning_rate, c.momentum, c.batch_size, c.max_epochs, c.patience, c.validation_fraction, self.best_epoch
        );
        for e in &self.epochs {
            out.push_str(&format!("{},{:e},{:e}\n", e.epoch, e.train_loss, e.val_loss));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: NetworkParams,
    pub log: TrainingLog,
}

/// Per-label shuffle, then the first `round(fraction * n)` rows of each label
/// (at least one, at most `n - 1`) go to the held-out side. Returns
/// `(kept, held_out)` row indices, each sorted.
pub fn stratified_indices(
    labels: &[Emotion],
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut kept = Vec::new();
    let mut held = Vec::new();
    for label in Emotion::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        if idx.is_empty() {
            continue;
        }
        idx.shuffle(rng);
        let n = idx.len();
        let n_held = ((fraction * n as f64).round() as usize).clamp(1.min(n - 1), n - 1);
        held.extend_from_slice(&idx[..n_held]);
        kept.extend_from_slice(&idx[n_held..]);
    }
    kept.sort_unstable();
    held.sort_unstable();
    (kept, held)
}

fn glorot(rng: &mut ChaCha8Rng, fan_in: usize, fan_out: usize, len: usize) -> Vec<f64> {
    let r = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..len).map(|_| rng.gen_range(-r..=r)).collect()
}

/// Column means and population standard deviations; zero-variance columns get
/// std 1 and are reported.
pub fn standardization(matrix: &FeatureMatrix) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let n = matrix.n_rows() as f64;
    let mut means = Vec::with_capacity(matrix.n_features());
    let mut stds = Vec::with_capacity(matrix.n_features());
    let mut constant = Vec::new();
    for c in 0..matrix.n_features() {
        let col = matrix.column(c);
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        means.push(mean);
        if std > 0.0 && std > 1e-12 * mean.abs() {
            stds.push(std);
        } else {
            stds.push(1.0);
            constant.push(c);
        }
    }
    (means, stds, constant)
}

fn apply(params: &mut NetworkParams, velocity: &mut [Vec<f64>; 4], g: &super::Gradients, cfg: &TrainConfig) {
    let blocks: [&mut Vec<f64>; 4] = [&mut params.w1, &mut params.b1, &mut params.w2, &mut params.b2];
    for ((p, v), gb) in blocks.into_iter().zip(velocity.iter_mut()).zip(g.blocks()) {
        for ((pi, vi), gi) in p.iter_mut().zip(v.iter_mut()).zip(gb) {
            *vi = cfg.momentum * *vi - cfg.learning_rate * gi;
            *pi += *vi;
        }
    }
}

/// Trains the classifier on a projected feature matrix.
///
/// Rows are split into a stratified validation subset and a training subset.
/// Mini-batch gradient descent with momentum runs until the validation loss
/// fails to improve for `patience` epochs; the best-validation parameters are
/// returned. Fully determined by `(matrix, schema, config)`.
pub fn train(matrix: &FeatureMatrix, schema: &SelectionSchema, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if matrix.feature_names != schema.feature_names() {
        return Err(Error::Format("feature matrix columns do not match the schema slots".into()));
    }
    train_with_hidden(matrix, schema.hash(), HIDDEN, config)
}

/// As [`train`] with an explicit hidden width and schema digest.
pub fn train_with_hidden(
    matrix: &FeatureMatrix,
    schema_hash: String,
    n_hidden: usize,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    matrix.require_rows(&Emotion::ALL, 2)?;
    let n_inputs = matrix.n_features();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let labels: Vec<Emotion> = matrix.rows.iter().map(|r| r.label).collect();
    let (train_idx, val_idx) = stratified_indices(&labels, config.validation_fraction, &mut rng);

    let (means, stds, constant) = standardization(matrix);
    let mut params = NetworkParams {
        n_inputs,
        n_hidden,
        n_outputs: OUTPUTS,
        w1: glorot(&mut rng, n_inputs, n_hidden, n_hidden * n_inputs),
        b1: vec![0.0; n_hidden],
        w2: glorot(&mut rng, n_hidden, OUTPUTS, OUTPUTS * n_hidden),
        b2: vec![0.0; OUTPUTS],
        feature_means: means,
        feature_stds: stds,
        constant_inputs: constant,
        schema_hash,
    };

    let to_examples = |idx: &[usize]| -> Vec<Example> {
        idx.iter()
            .map(|&i| Example {
                features: matrix.rows[i].values.clone(),
                class: matrix.rows[i].label.index(),
            })
            .collect()
    };
    let train_set = to_examples(&train_idx);
    let val_set = to_examples(&val_idx);

    let check = |epoch: usize, l: f64| -> Result<f64> {
        if l.is_finite() {
            Ok(l)
        } else {
            Err(Error::Divergence { epoch, loss: l })
        }
    };

    let mut epochs = vec![EpochLog {
        epoch: 0,
        train_loss: check(0, loss(&params, &train_set)?)?,
        val_loss: check(0, loss(&params, &val_set)?)?,
    }];
    let mut best = (epochs[0].val_loss, 0, params.clone());
    let mut velocity = [
        vec![0.0; params.w1.len()],
        vec![0.0; params.b1.len()],
        vec![0.0; params.w2.len()],
        vec![0.0; params.b2.len()],
    ];
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<Example> = chunk.iter().map(|&i| train_set[i].clone()).collect();
            let g = gradient(&params, &batch)?;
            apply(&mut params, &mut velocity, &g, config);
        }
        let train_loss = check(epoch, loss(&params, &train_set)?)?;
        let val_loss = check(epoch, loss(&params, &val_set)?)?;
        epochs.push(EpochLog {
            epoch,
            train_loss,
            val_loss,
        });
        if val_loss < best.0 {
            best = (val_loss, epoch, params.clone());
        } else if epoch - best.1 >= config.patience {
            break;
        }
    }

    let ids = |idx: &[usize]| idx.iter().map(|&i| matrix.rows[i].id.clone()).collect();
    Ok(TrainOutcome {
        params: best.2,
        log: TrainingLog {
            config: config.clone(),
            epochs,
            best_epoch: best.1,
            train_ids: ids(&train_idx),
            validation_ids: ids(&val_idx),
        },
    })
}
