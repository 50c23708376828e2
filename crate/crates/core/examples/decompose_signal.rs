//! Ten-level Db8 decomposition of a chirp: subband energies, perfect
//! reconstruction, and a packet tree for comparison.
//!
//! ```bash
//! cargo run -p emowave --example decompose_signal
//! ```

use std::f64::consts::PI;

use emowave::wavelet::{daubechies_filter, decompose, dump_tree, packet_decompose, reconstruct};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4096;
    let signal: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            (2.0 * PI * (20.0 + 900.0 * t) * t).sin()
        })
        .collect();
    let total: f64 = signal.iter().map(|x| x * x).sum();

    let db8 = daubechies_filter(8)?;
    let tree = decompose(&signal, &db8, 10)?;
    for band in &tree.subbands {
        println!(
            "{:>4}  {:5} coefficients  {:6.2}% of energy",
            band.label(),
            band.coefficients.len(),
            100.0 * band.energy() / total
        );
    }
    let back = reconstruct(&tree)?;
    let err = signal.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("reconstruction max abs error {err:.2e}");

    let packets = packet_decompose(&signal, &db8, 3)?;
    println!("\npacket tree, level 3:");
    for band in &packets.subbands {
        println!("{:>6}  {:6.2}%", band.label(), 100.0 * band.energy() / total);
    }

    let short = decompose(&signal[..64], &daubechies_filter(1)?, 2)?;
    println!("\nHaar, 64 samples, 2 levels:");
    dump_tree(&short, std::io::stdout())?;
    Ok(())
}
