//! Full run on the seeded synthetic corpus: 7 classes x 40 recordings x 8192
//! samples, Db1/Db6/Db8/Db10 to ten levels, 42-50-7 network.
//!
//! ```bash
//! cargo run --release -p emowave --example synthetic_pipeline -- /tmp/emowave-run
//! ```

use emowave::eval::{render_confusion, render_pairwise, run_pipeline, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/synthetic-run".into());
    let config = RunConfig::synthetic(1, 40, 8192, &out);
    let start = std::time::Instant::now();
    let report = run_pipeline(&config)?;

    println!(
        "{} recordings, {} features, best epoch {} of {}",
        report.n_recordings,
        report.n_features,
        report.training.log.best_epoch,
        report.training.log.epochs.len() - 1
    );
    println!("\n{}", render_confusion(&report.evaluation.confusion));
    println!("{}", render_pairwise(&report.evaluation.pairwise()?));
    println!(
        "overall accuracy {:.2}%  ({:.1}s, artifacts in {out})",
        report.evaluation.overall_accuracy()?,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
