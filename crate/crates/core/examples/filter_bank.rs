//! Daubechies filter coefficients and their orthonormality checks.
//!
//! ```bash
//! cargo run -p emowave --example filter_bank
//! ```

use emowave::wavelet::{daubechies_filter, SUPPORTED_ORDERS};

fn main() -> emowave::Result<()> {
    for order in SUPPORTED_ORDERS {
        let w = daubechies_filter(order)?;
        let r = w.check();
        println!("{}: {} taps, passes = {}", w.name, w.len(), r.passes());
        println!("  lowpass  {:?}", w.lowpass);
        println!("  highpass {:?}", w.highpass);
        println!(
            "  sum {:.1e}  energy {:.1e}  orthogonality {:.1e}  moments {:.1e}",
            r.sum_error, r.energy_error, r.orthogonality_error, r.moment_error
        );
    }
    Ok(())
}
