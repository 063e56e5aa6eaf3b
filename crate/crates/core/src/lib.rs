//! Worst-case minimum-distance ISI channels.
//!
//! The squared distance an error event `ε` produces on a unit-energy FIR
//! channel `f` is `fᵀ A f`, with `A` the Toeplitz autocorrelation matrix of
//! `ε`. Minimizing over channels gives the smallest eigenvalue of `A`;
//! minimizing that over events gives the worst channel of each length.
//!
//! * [`events`] enumerates canonical error events.
//! * [`corrmat`] builds their correlation matrices.
//! * [`eigen`] is a Jacobi eigensolver with interlacing checks.
//! * [`worstcase`] searches for worst channels and probes their structure.
//! * [`distance`] computes `d²_min` of a given channel by trellis search.
//! * [`mlse`] simulates transmission and Viterbi detection.

pub mod channel;
pub mod cli;
pub mod corrmat;
pub mod distance;
pub mod eigen;
pub mod error;
pub mod events;
pub mod mlse;
pub mod roots;
pub mod verify;
pub mod worstcase;

pub use channel::ChannelTaps;
pub use error::{Error, Result};
pub use events::{AlphabetSpec, ErrorEvent};
