mod common;

use common::*;
use emowave::classifier::{
    forward, gradient, loss, predict, softmax, standardization, train, train_with_hidden, Example,
    NetworkParams, TrainConfig, HIDDEN, INPUTS, OUTPUTS,
};
use emowave::features::FeatureMatrix;
use emowave::select::{build_schema, project};
use emowave::{Emotion, Error};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_params(r: &mut ChaCha8Rng, ni: usize, nh: usize) -> NetworkParams {
    let mut p = NetworkParams::zeros(ni, nh, OUTPUTS);
    for block in [&mut p.w1, &mut p.b1, &mut p.w2, &mut p.b2] {
        block.iter_mut().for_each(|v| *v = r.gen_range(-0.5..0.5));
    }
    p.feature_means.iter_mut().for_each(|v| *v = r.gen_range(-0.2..0.2));
    p.feature_stds.iter_mut().for_each(|v| *v = r.gen_range(0.5..2.0));
    p
}

fn random_batch(r: &mut ChaCha8Rng, ni: usize, n: usize) -> Vec<Example> {
    (0..n)
        .map(|_| Example {
            features: (0..ni).map(|_| r.gen_range(-2.0..2.0)).collect(),
            class: r.gen_range(0..OUTPUTS),
        })
        .collect()
}

/// Straight-line forward pass: standardize, tanh layer, linear layer.
#[allow(clippy::needless_range_loop)]
fn logits_oracle(p: &NetworkParams, x: &[f64]) -> Vec<f64> {
    let z: Vec<f64> = (0..p.n_inputs).map(|i| (x[i] - p.feature_means[i]) / p.feature_stds[i]).collect();
    let mut h = vec![0.0; p.n_hidden];
    for j in 0..p.n_hidden {
        let mut s = p.b1[j];
        for i in 0..p.n_inputs {
            s += p.w1[j * p.n_inputs + i] * z[i];
        }
        h[j] = s.tanh();
    }
    let mut o = vec![0.0; p.n_outputs];
    for k in 0..p.n_outputs {
        let mut s = p.b2[k];
        for j in 0..p.n_hidden {
            s += p.w2[k * p.n_hidden + j] * h[j];
        }
        o[k] = s;
    }
    o
}

fn loss_oracle(p: &NetworkParams, batch: &[Example]) -> f64 {
    let mut total = 0.0;
    for ex in batch {
        let o = logits_oracle(p, &ex.features);
        let m = o.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let denom: f64 = o.iter().map(|v| (v - m).exp()).sum();
        total += -((o[ex.class] - m).exp() / denom).ln();
    }
    total / batch.len() as f64
}

#[test]
fn zero_network() {
    let p = NetworkParams::zeros(INPUTS, HIDDEN, OUTPUTS);
    let out = forward(&p, &[1.5; INPUTS]).unwrap();
    assert!(out.iter().all(|v| (v - 1.0 / 7.0).abs() < 1e-15));
    let batch = random_batch(&mut rng(1), INPUTS, 5);
    assert!((loss(&p, &batch).unwrap() - 7f64.ln()).abs() < 1e-12);
}

#[test]
fn confident_network_has_tiny_loss() {
    let mut p = NetworkParams::zeros(INPUTS, HIDDEN, OUTPUTS);
    p.b2[3] = 60.0;
    let batch = vec![Example {
        features: vec![0.0; INPUTS],
        class: 3,
    }];
    assert!(loss(&p, &batch).unwrap() < 1e-20);
    let (label, m) = predict(&p, &[0.0; INPUTS]).unwrap();
    assert_eq!(label, Emotion::Anxiety);
    assert!((m[3] - 1.0).abs() < 1e-15);
}

#[test]
fn loss_matches_oracle() {
    let mut r = rng(2);
    for _ in 0..5 {
        let p = random_params(&mut r, INPUTS, HIDDEN);
        let batch = random_batch(&mut r, INPUTS, 9);
        assert!((loss(&p, &batch).unwrap() - loss_oracle(&p, &batch)).abs() < 1e-12);
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let step = 1e-5;
    for restart in 0..5 {
        let mut r = rng(100 + restart);
        let mut p = random_params(&mut r, INPUTS, HIDDEN);
        let batch = random_batch(&mut r, INPUTS, 8);
        let g = gradient(&p, &batch).unwrap();
        let analytic: Vec<Vec<f64>> = g.blocks().iter().map(|b| b.to_vec()).collect();
        let mut worst = 0.0f64;
        for (bi, grad) in analytic.iter().enumerate() {
            for (i, &a) in grad.iter().enumerate() {
                let set = |p: &mut NetworkParams, v: f64| match bi {
                    0 => p.w1[i] = v,
                    1 => p.b1[i] = v,
                    2 => p.w2[i] = v,
                    _ => p.b2[i] = v,
                };
                let orig = [&p.w1, &p.b1, &p.w2, &p.b2][bi][i];
                set(&mut p, orig + step);
                let up = loss(&p, &batch).unwrap();
                set(&mut p, orig - step);
                let down = loss(&p, &batch).unwrap();
                set(&mut p, orig);
                let numeric = (up - down) / (2.0 * step);
                // Coordinates with |gradient| below 1e-3 are compared on that
                // absolute scale; central differences cannot resolve them further.
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-3);
                worst = worst.max(rel);
            }
        }
        assert!(worst < 1e-6, "restart {restart}: {worst:e}");
    }
}

#[test]
fn gradient_identities() {
    let mut r = rng(3);
    let p = random_params(&mut r, INPUTS, HIDDEN);
    let batch = random_batch(&mut r, INPUTS, 8);
    let g = gradient(&p, &batch).unwrap();
    assert!(g.b2.iter().sum::<f64>().abs() < 1e-12);
    let doubled: Vec<Example> = batch.iter().chain(&batch).cloned().collect();
    let g2 = gradient(&p, &doubled).unwrap();
    for (a, b) in g.blocks().iter().zip(g2.blocks()) {
        assert!(max_abs_diff(a, b) < 1e-12);
    }
    assert!(matches!(gradient(&p, &[]), Err(Error::EmptyBatch)));
}

#[test]
fn input_validation() {
    let p = NetworkParams::zeros(INPUTS, HIDDEN, OUTPUTS);
    assert!(matches!(forward(&p, &[0.0; 3]), Err(Error::LengthMismatch { .. })));
    let mut x = vec![0.0; INPUTS];
    x[5] = f64::NAN;
    assert!(matches!(forward(&p, &x), Err(Error::NonFiniteInput)));
}

/// 14 rows, two per label; input k is 3 for label k and 0 otherwise.
fn separable() -> FeatureMatrix {
    let names: Vec<String> = (0..7).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    matrix_from(&refs, 2, |label, i| {
        (0..7).map(|k| if k == label.index() { 3.0 } else { 0.0 } + 0.1 * i as f64).collect()
    })
}

fn accuracy(p: &NetworkParams, m: &FeatureMatrix) -> f64 {
    let hits = m.rows.iter().filter(|r| predict(p, &r.values).unwrap().0 == r.label).count();
    hits as f64 / m.n_rows() as f64
}

#[test]
fn separable_rows_are_learned() {
    let m = separable();
    let cfg = TrainConfig {
        seed: 5,
        batch_size: 4,
        max_epochs: 500,
        patience: 500,
        ..TrainConfig::default()
    };
    let out = train_with_hidden(&m, "test".into(), HIDDEN, &cfg).unwrap();
    assert_eq!(accuracy(&out.params, &m), 1.0);
    assert!(out.log.epochs.len() <= 501);
    let last = out.log.epochs.last().unwrap();
    assert!(last.train_loss < out.log.epochs[0].train_loss);
    assert_eq!(out.log.validation_ids.len(), 7);
}

#[test]
fn training_is_deterministic_and_stops_early() {
    let m = noise_matrix_42(8);
    let cfg = TrainConfig {
        seed: 9,
        max_epochs: 300,
        patience: 10,
        ..TrainConfig::default()
    };
    let a = train_with_hidden(&m, "h".into(), HIDDEN, &cfg).unwrap();
    let b = train_with_hidden(&m, "h".into(), HIDDEN, &cfg).unwrap();
    assert_eq!(a.params, b.params);
    assert_eq!(a.log, b.log);
    let c = train_with_hidden(&m, "h".into(), HIDDEN, &TrainConfig { seed: 10, ..cfg.clone() }).unwrap();
    assert_ne!(a.params, c.params);

    let log = &a.log;
    let best = log.epochs[log.best_epoch].val_loss;
    assert!(log.epochs.iter().all(|e| best <= e.val_loss));
    let last = log.epochs.last().unwrap().epoch;
    assert!(last - log.best_epoch <= cfg.patience);
    if last < cfg.max_epochs {
        assert_eq!(last - log.best_epoch, cfg.patience);
    }
    assert_eq!(log.epochs[0].epoch, 0);
}

/// Noise except for one weakly informative column per label.
fn noise_matrix_42(per_class: usize) -> FeatureMatrix {
    let names: Vec<String> = (0..INPUTS).map(|i| format!("n{i:02}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut r = rng(77);
    matrix_from(&refs, per_class, |label, _| {
        (0..INPUTS)
            .map(|k| r.gen_range(-1.0..1.0) + if k == label.index() { 0.8 } else { 0.0 })
            .collect()
    })
}

#[test]
fn standardized_training_columns() {
    let mut m = noise_matrix_42(6);
    for (i, row) in m.rows.iter_mut().enumerate() {
        row.values[0] = 1e3 + 7.0 * i as f64;
        row.values[1] = 4.0;
    }
    let (means, stds, constant) = standardization(&m);
    assert_eq!(constant, vec![1]);
    assert_eq!(stds[1], 1.0);
    let mut p = NetworkParams::zeros(INPUTS, HIDDEN, OUTPUTS);
    p.feature_means = means;
    p.feature_stds = stds;
    let z: Vec<Vec<f64>> = m.rows.iter().map(|r| p.standardize(&r.values)).collect();
    for c in (0..INPUTS).filter(|c| !constant.contains(c)) {
        let col: Vec<f64> = z.iter().map(|r| r[c]).collect();
        assert!(mean(&col).abs() < 1e-10);
        assert!((pop_std(&col) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn params_bound_to_schema() {
    let raw = noise_matrix_42(5);
    let schema = build_schema(&raw).unwrap();
    let m = project(&raw, &schema).unwrap();
    let cfg = TrainConfig {
        seed: 2,
        max_epochs: 20,
        ..TrainConfig::default()
    };
    let out = train(&m, &schema, &cfg).unwrap();
    assert_eq!(out.params.schema_hash, schema.hash());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.json");
    out.params.save(&path).unwrap();
    assert_eq!(NetworkParams::load(&path, &schema).unwrap(), out.params);

    let mut other = schema.clone();
    other.slots.swap(0, 5);
    assert!(matches!(NetworkParams::load(&path, &other), Err(Error::SchemaHashMismatch { .. })));
    assert!(train(&raw, &schema, &cfg).is_err());

    for row in &m.rows {
        let (label, memberships) = predict(&out.params, &row.values).unwrap();
        let oracle = logits_oracle(&out.params, &row.values);
        let mut best = 0;
        for k in 1..OUTPUTS {
            if oracle[k] > oracle[best] {
                best = k;
            }
        }
        assert_eq!(label.index(), best);
        assert!(max_abs_diff(&memberships, &softmax(&oracle)) < 1e-12);
    }
}

#[test]
fn divergence_is_reported() {
    let m = noise_matrix_42(4);
    let cfg = TrainConfig {
        seed: 1,
        learning_rate: f64::MAX,
        momentum: 0.0,
        max_epochs: 50,
        ..TrainConfig::default()
    };
    match train_with_hidden(&m, "h".into(), HIDDEN, &cfg) {
        Err(Error::Divergence { .. }) => {}
        other => panic!("expected divergence, got {:?}", other.map(|o| o.log.best_epoch)),
    }
}

proptest! {
    #[test]
    fn softmax_is_a_distribution(logits in prop::collection::vec(-15.0f64..15.0, 7), shift in -100.0f64..100.0) {
        let s = softmax(&logits);
        prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(s.iter().all(|&v| v > 0.0 && v < 1.0));
        let moved: Vec<f64> = logits.iter().map(|v| v + shift).collect();
        prop_assert!(max_abs_diff(&s, &softmax(&moved)) < 1e-12);
    }

    #[test]
    fn argmax_survives_monotone_maps(seed: u64) {
        let mut r = rng(seed);
        let p = random_params(&mut r, INPUTS, 8);
        let x: Vec<f64> = (0..INPUTS).map(|_| r.gen_range(-2.0..2.0)).collect();
        let (label, _) = predict(&p, &x).unwrap();
        let logits = p.logits(&x).unwrap();
        let mapped: Vec<f64> = logits.iter().map(|v| 3.0 * v.exp() + 1.0).collect();
        let mut best = 0;
        for k in 1..OUTPUTS {
            if mapped[k] > mapped[best] {
                best = k;
            }
        }
        prop_assert_eq!(label.index(), best);
    }
}
