pub mod audio;
pub mod classifier;
pub mod emotion;
pub mod error;
pub mod eval;
pub mod features;
mod io_util;
pub mod select;
pub mod wavelet;

pub use emotion::Emotion;
pub use error::{Error, Result};
pub use io_util::write_atomic;
