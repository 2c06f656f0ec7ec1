//! Codes for binary strings that can be recovered from the multiset of
//! their substring compositions, the idealized readout of a tandem mass
//! spectrometer fragmenting a binary polymer.
//!
//! - [`composition`]: strings, multisets, cumulative and pair weights.
//! - [`ballot`]: counting and ranking of ballot pair sequences.
//! - [`codebook`]: the reconstruction code and its message mapping.
//! - [`reconstruct`]: forced decoding and the exhaustive backtracking oracle.
//! - [`ecc`]: the single composition error correcting code.
//! - [`channel`]: single composition error injection.
//! - [`experiment`]: sweeps and reports driven by the CLI.

pub mod ballot;
pub mod channel;
pub mod cli;
pub mod codebook;
pub mod composition;
pub mod ecc;
mod error;
pub mod experiment;
pub mod format;
pub mod reconstruct;

pub use codebook::{params_r, CodeParamsR};
pub use composition::{fragment, BinaryString, Composition, CompositionMultiset, WeightProfile};
pub use ecc::{decode_c, params_c, CodeParamsC};
pub use error::{Error, Result};
pub use reconstruct::{backtrack_all, decode_r, reconstruct_codeword};
