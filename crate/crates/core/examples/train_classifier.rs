//! Trains the 42-50-7 network on a projected training split and shows the
//! early-stopping log and held-out predictions.
//!
//! ```bash
//! cargo run --release -p emowave --example train_classifier
//! ```

use emowave::audio::synth_corpus;
use emowave::classifier::{predict, train, TrainConfig};
use emowave::eval::split;
use emowave::features::extract_corpus;
use emowave::select::{build_schema, project};
use emowave::wavelet::parse_wavelet_list;

fn main() -> emowave::Result<()> {
    let corpus = synth_corpus(5, 20, 4096)?;
    let matrix = extract_corpus(&corpus, &parse_wavelet_list("db1,db6,db8,db10")?, 10)?;
    let (train_rows, test_rows) = split(&matrix, 5, 0.2)?;
    let schema = build_schema(&train_rows)?;

    let config = TrainConfig {
        seed: 5,
        max_epochs: 300,
        ..TrainConfig::default()
    };
    let outcome = train(&project(&train_rows, &schema)?, &schema, &config)?;
    let log = &outcome.log;
    for e in log.epochs.iter().step_by(25) {
        println!("epoch {:>3}  train {:.4}  validation {:.4}", e.epoch, e.train_loss, e.val_loss);
    }
    println!("best epoch {} of {}", log.best_epoch, log.epochs.len() - 1);

    let test = project(&test_rows, &schema)?;
    let mut hits = 0;
    for row in &test.rows {
        let (label, memberships) = predict(&outcome.params, &row.values)?;
        hits += usize::from(label == row.label);
        let m: Vec<String> = memberships.iter().map(|m| format!("{m:.2}")).collect();
        println!("{:<22} {:<10} -> {:<10} [{}]", row.id, row.label, label, m.join(" "));
    }
    println!("held-out accuracy {hits}/{}", test.n_rows());
    Ok(())
}
