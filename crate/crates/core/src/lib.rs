//! Monte-Carlo simulator for the uplink of a cooperative DS-CDMA network.
//!
//! The crate is split along the processing chain:
//!
//! - [`signal`]: spreading codes, convolution matrices, multipath channels,
//!   noise and received-vector synthesis.
//! - [`detect`]: RAKE front-end, slicer, reliability partition, candidate
//!   lists, ML list selection, PIC/SIC and the composed GL-PIC detector.
//! - [`selection`]: min-user SINR of a relay subset and the exhaustive,
//!   standard greedy and proposed greedy relay selection strategies.
//! - [`sim`]: per-packet two-phase decode-and-forward transmission and BER
//!   accounting over SNR or load sweeps.
//! - [`cli`]: configuration parsing, presets and result emission for the
//!   `cdmasim` binary.

pub mod cli;
pub mod detect;
mod error;
pub mod selection;
pub mod signal;
pub mod sim;

pub use error::{Error, Result};

/// Complex baseband sample type used throughout the crate.
pub type Complex = num_complex::Complex64;
