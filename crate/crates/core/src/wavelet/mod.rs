//! Daubechies filter banks and multi-level periodic wavelet transforms.

mod filters;
mod transform;

pub use filters::{
    daubechies_filter, parse_wavelet_list, qmf_highpass, InvariantReport, WaveletSpec,
    SUPPORTED_ORDERS,
};
pub use transform::{
    analysis_step, decompose, dump_tree, packet_decompose, reconstruct, synthesis_step,
    BoundaryMode, DecompositionTree, Subband, SubbandKind, TreeMode,
};
