//! Builds a manifest for an Emo-DB `wav/` directory and runs the full
//! pipeline on it.
//!
//! ```bash
//! cargo run --release -p emowave --example emodb_run -- /data/emodb/wav /tmp/emodb-run
//! ```

use emowave::audio::emodb_manifest;
use emowave::eval::{render_confusion, render_pairwise, run_pipeline, CorpusSource, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (Some(wav_dir), Some(out)) = (args.next(), args.next()) else {
        eprintln!("usage: emodb_run <emodb wav dir> <output dir>");
        std::process::exit(1);
    };
    let mut manifest = emodb_manifest(&wav_dir)?;
    println!("{} labeled files, per label {:?}", manifest.entries.len(), manifest.label_counts());
    std::fs::create_dir_all(&out)?;
    for e in &mut manifest.entries {
        e.path = std::path::Path::new(&wav_dir).join(&e.path);
    }
    let manifest_path = std::path::Path::new(&out).join("manifest.txt");
    manifest.write(&manifest_path)?;

    let mut config = RunConfig::synthetic(1, 2, 256, &out);
    config.source = CorpusSource::Manifest(manifest_path);
    let report = run_pipeline(&config)?;
    println!("{}", render_confusion(&report.evaluation.confusion));
    println!("{}", render_pairwise(&report.evaluation.pairwise()?));
    println!("overall accuracy {:.2}%", report.evaluation.overall_accuracy()?);
    Ok(())
}
