//! Confusion and pairwise-error tables from a fixed set of counts (the
//! seven-class result of the original Emo-DB experiment).
//!
//! ```bash
//! cargo run -p emowave --example report_tables
//! ```

use emowave::eval::{
    balanced_accuracy, overall_accuracy, pairwise_errors, pairwise_errors_balanced, render_confusion,
    render_counts, render_pairwise, ConfusionMatrix,
};

fn main() -> emowave::Result<()> {
    let cm = ConfusionMatrix::from_counts([
        [70, 0, 0, 1, 5, 1, 1],
        [1, 41, 2, 0, 1, 0, 0],
        [0, 2, 60, 2, 1, 5, 0],
        [1, 1, 1, 64, 2, 0, 0],
        [5, 0, 0, 2, 73, 0, 0],
        [0, 1, 6, 2, 0, 117, 0],
        [1, 0, 0, 1, 2, 0, 56],
    ]);
    println!("{}", render_counts(&cm));
    println!("{}", render_confusion(&cm));
    println!("overall accuracy  {:.2}%", overall_accuracy(&cm)?);
    println!("balanced accuracy {:.2}%\n", balanced_accuracy(&cm)?);
    println!("pooled:\n{}", render_pairwise(&pairwise_errors(&cm)?));
    let balanced = pairwise_errors_balanced(&cm)?;
    println!("class-balanced:\n{}", render_pairwise(&balanced));
    if let Some(((a, b), e)) = balanced.worst() {
        println!("most confused: {} - {} ({e:.2}%)", a.title(), b.title());
    }
    Ok(())
}
