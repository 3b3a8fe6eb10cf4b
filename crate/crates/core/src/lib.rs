//! Multi-path interference with which-path detectors and path-selective
//! decoherence.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`quanton`]: path amplitudes, detector overlaps, reduced density
//!   matrices and the l1-norm coherence;
//! * [`interference`]: output-channel intensity versus a common phase and
//!   the visibility sweeps over the detector overlap β;
//! * [`bath`]: the oscillator-bath environment and screen probability
//!   densities;
//! * [`metrology`]: coherence measurement protocols and the coherence decay
//!   under path-selective decoherence;
//! * [`fringe`]: fringe scans and Michelson visibility.
#![no_std]

extern crate alloc;

pub mod bath;
pub mod constants;
mod error;
pub mod fringe;
pub mod interference;
pub mod linalg;
pub mod metrology;
pub mod quanton;

pub use error::{Error, Result};
