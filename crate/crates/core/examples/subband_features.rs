//! The 352-feature vector of one recording: 4 wavelets x 11 subbands x 8
//! statistics.
//!
//! ```bash
//! cargo run -p emowave --example subband_features [path/to/file.wav]
//! ```

use emowave::audio::{read_wav, synth_corpus, Recording};
use emowave::features::{extract_recording, feature_names};
use emowave::wavelet::parse_wavelet_list;
use emowave::Emotion;

fn main() -> emowave::Result<()> {
    let rec = match std::env::args().nth(1) {
        Some(path) => {
            let wav = read_wav(&path)?;
            Recording {
                id: path,
                samples: wav.samples,
                sample_rate: wav.sample_rate,
                label: Emotion::Neutral,
            }
        }
        None => synth_corpus(7, 2, 8192)?.swap_remove(10),
    };
    let wavelets = parse_wavelet_list("db1,db6,db8,db10")?;
    let names = feature_names(&wavelets, 10);
    let fv = extract_recording(&rec, &wavelets, 10)?;
    println!("{}: {} samples at {} Hz, {} features", rec.id, rec.samples.len(), rec.sample_rate, names.len());
    for (name, value) in names.iter().zip(&fv.values).filter(|(n, _)| n.starts_with("db6.")) {
        println!("{name:<22} {value:>14.6e}");
    }
    if !fv.degenerate.is_empty() {
        println!("{} shape statistics zeroed on constant subbands", fv.degenerate.len());
    }
    Ok(())
}
