//! Feedforward emotion classifier: standardized inputs, one tanh hidden layer,
//! softmax membership outputs, cross-entropy training.

mod network;
mod train;

pub use network::{
    forward, gradient, loss, predict, softmax, Example, Gradients, NetworkParams, HIDDEN, INPUTS,
    OUTPUTS,
};
pub use train::{
    standardization, stratified_indices, train, train_with_hidden, EpochLog, TrainConfig,
    TrainOutcome, TrainingLog,
};
