//! Pairwise Welch t-test ranking and the resulting 42-slot schema.
//!
//! ```bash
//! cargo run --release -p emowave --example feature_selection
//! ```

use emowave::audio::synth_corpus;
use emowave::eval::split;
use emowave::features::extract_corpus;
use emowave::select::{build_schema, project, rank_pair};
use emowave::wavelet::parse_wavelet_list;
use emowave::Emotion;

fn main() -> emowave::Result<()> {
    let corpus = synth_corpus(3, 20, 4096)?;
    let matrix = extract_corpus(&corpus, &parse_wavelet_list("db1,db6,db8,db10")?, 10)?;
    let (train, _) = split(&matrix, 3, 0.2)?;

    println!("top features for boredom vs neutral:");
    for r in rank_pair(&train, (Emotion::Boredom, Emotion::Neutral))?.iter().take(5) {
        println!("  {:<22} t = {:>8.3}  dof = {:>6.2}  p = {:.3e}", r.feature_name, r.t_stat, r.dof, r.p_value);
    }

    let schema = build_schema(&train)?;
    println!("\n{}", schema.to_text());
    println!("schema hash {}", schema.hash());
    let projected = project(&train, &schema)?;
    println!("projected training matrix: {} x {}", projected.n_rows(), projected.n_features());
    Ok(())
}
