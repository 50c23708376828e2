use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::emotion::Emotion;
use crate::error::{Error, Result};
use crate::select::SelectionSchema;

pub const INPUTS: usize = 42;
pub const HIDDEN: usize = 50;
pub const OUTPUTS: usize = Emotion::COUNT;

const FORMAT_TAG: &str = "emowave-network";
const FORMAT_VERSION: u32 = 1;

/// Weights of a single-hidden-layer tanh network with softmax outputs, plus
/// the input standardization frozen at training time.
///
/// Matrices are row-major: `w1` is `hidden x inputs`, `w2` is `outputs x hidden`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub n_outputs: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
    /// Inputs whose training column had zero variance (their std was set to 1).
    pub constant_inputs: Vec<usize>,
    pub schema_hash: String,
}

/// One labeled input; `class` indexes the output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: Vec<f64>,
    pub class: usize,
}

/// Same shapes as the trainable blocks of [`NetworkParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl Gradients {
    pub fn zeros_like(p: &NetworkParams) -> Self {
        Gradients {
            w1: vec![0.0; p.w1.len()],
            b1: vec![0.0; p.b1.len()],
            w2: vec![0.0; p.w2.len()],
            b2: vec![0.0; p.b2.len()],
        }
    }

    pub fn blocks(&self) -> [&[f64]; 4] {
        [&self.w1, &self.b1, &self.w2, &self.b2]
    }
}

/// Intermediate values of one forward pass.
struct Activations {
    z: Vec<f64>,
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_sum_exp(logits: &[f64]) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + logits.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl NetworkParams {
    /// All weights and biases zero, identity standardization.
    pub fn zeros(n_inputs: usize, n_hidden: usize, n_outputs: usize) -> Self {
        NetworkParams {
            n_inputs,
            n_hidden,
            n_outputs,
            w1: vec![0.0; n_hidden * n_inputs],
            b1: vec![0.0; n_hidden],
            w2: vec![0.0; n_outputs * n_hidden],
            b2: vec![0.0; n_outputs],
            feature_means: vec![0.0; n_inputs],
            feature_stds: vec![1.0; n_inputs],
            constant_inputs: Vec::new(),
            schema_hash: String::new(),
        }
    }

    pub fn standardize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.feature_means.iter().zip(&self.feature_stds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_inputs {
            return Err(Error::LengthMismatch {
                what: "input vs network inputs",
                left: x.len(),
                right: self.n_inputs,
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(())
    }

    fn activations(&self, x: &[f64]) -> Activations {
        let z = self.standardize(x);
        let hidden: Vec<f64> = (0..self.n_hidden)
            .map(|j| {
                let row = &self.w1[j * self.n_inputs..(j + 1) * self.n_inputs];
                let pre: f64 = row.iter().zip(&z).map(|(w, v)| w * v).sum::<f64>() + self.b1[j];
                pre.tanh()
            })
            .collect();
        let logits = (0..self.n_outputs)
            .map(|k| {
                let row = &self.w2[k * self.n_hidden..(k + 1) * self.n_hidden];
                row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>() + self.b2[k]
            })
            .collect();
        Activations { z, hidden, logits }
    }

    /// Pre-softmax output scores.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.activations(x).logits)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = ParamsFile {
            format: FORMAT_TAG.to_string(),
            version: FORMAT_VERSION,
            params: self.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file)?;
        text.push('\n');
        crate::io_util::write_atomic(path, text.as_bytes())
    }

    /// Loads parameters, refusing files bound to a different schema.
    pub fn load(path: impl AsRef<Path>, schema: &SelectionSchema) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: ParamsFile = serde_json::from_str(&text)?;
        if file.format != FORMAT_TAG || file.version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported parameter file format {} v{}",
                file.format, file.version
            )));
        }
        let expected = schema.hash();
        if file.params.schema_hash != expected {
            return Err(Error::SchemaHashMismatch {
                expected,
                found: file.params.schema_hash,
            });
        }
        file.params.validate()?;
        Ok(file.params)
    }

    fn validate(&self) -> Result<()> {
        let shapes = [
            ("w1", self.w1.len(), self.n_hidden * self.n_inputs),
            ("b1", self.b1.len(), self.n_hidden),
            ("w2", self.w2.len(), self.n_outputs * self.n_hidden),
            ("b2", self.b2.len(), self.n_outputs),
            ("feature_means", self.feature_means.len(), self.n_inputs),
            ("feature_stds", self.feature_stds.len(), self.n_inputs),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::Format(format!("{name} has {got} entries, expected {want}")));
            }
        }
        let all = [&self.w1, &self.b1, &self.w2, &self.b2, &self.feature_means, &self.feature_stds];
        if all.iter().any(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::Format("non-finite parameter".into()));
        }
        if self.feature_stds.iter().any(|&s| s <= 0.0) {
            return Err(Error::Format("feature_stds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    format: String,
    version: u32,
    params: NetworkParams,
}

/// Membership values: softmax of the output scores.
pub fn forward(params: &NetworkParams, x: &[f64]) -> Result<Vec<f64>> {
    Ok(softmax(&params.logits(x)?))
}

/// Most likely label and all memberships. Ties go to the earlier label.
pub fn predict(params: &NetworkParams, x: &[f64]) -> Result<(Emotion, Vec<f64>)> {
    let memberships = forward(params, x)?;
    let mut best = 0;
    for (k, &m) in memberships.iter().enumerate() {
        if m > memberships[best] {
            best = k;
        }
    }
    let label = Emotion::from_index(best)
        .ok_or_else(|| Error::Format(format!("output {best} has no emotion label")))?;
    Ok((label, memberships))
}

fn check_batch(params: &NetworkParams, batch: &[Example]) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    for ex in batch {
        params.check_input(&ex.features)?;
        if ex.class >= params.n_outputs {
            return Err(Error::Format(format!("class {} out of range", ex.class)));
        }
    }
    Ok(())
}

/// Mean categorical cross-entropy.
pub fn loss(params: &NetworkParams, batch: &[Example]) -> Result<f64> {
    check_batch(params, batch)?;
    let total: f64 = batch
        .iter()
        .map(|ex| {
            let logits = params.activations(&ex.features).logits;
            log_sum_exp(&logits) - logits[ex.class]
        })
        .sum();
    Ok(total / batch.len() as f64)
}

/// Analytic gradient of [`loss`] by backpropagation.
#[allow(clippy::needless_range_loop)]
pub fn gradient(params: &NetworkParams, batch: &[Example]) -> Result<Gradients> {
    check_batch(params, batch)?;
    let (ni, nh, no) = (params.n_inputs, params.n_hidden, params.n_outputs);
    let mut g = Gradients::zeros_like(params);
    let scale = 1.0 / batch.len() as f64;
    let mut delta_hidden = vec![0.0; nh];
    for ex in batch {
        let act = params.activations(&ex.features);
        let mut delta_out = softmax(&act.logits);
        delta_out[ex.class] -= 1.0;

        delta_hidden.iter_mut().for_each(|d| *d = 0.0);
        for k in 0..no {
            let d = delta_out[k] * scale;
            g.b2[k] += d;
            let row = k * nh;
            for j in 0..nh {
                g.w2[row + j] += d * act.hidden[j];
                delta_hidden[j] += params.w2[row + j] * delta_out[k];
            }
        }
        for j in 0..nh {
            let h = act.hidden[j];
            let d = delta_hidden[j] * (1.0 - h * h) * scale;
            g.b1[j] += d;
            let row = j * ni;
            for i in 0..ni {
                g.w1[row + i] += d * act.z[i];
            }
        }
    }
    Ok(g)
}
