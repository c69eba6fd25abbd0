//! Link-level building blocks for multi-cell high-speed-train OFDM.
//!
//! The crate models a railway served by a chain of same-frequency base
//! stations and provides:
//!
//! * [`geometry`]: cell layout, train kinematics, Doppler shifts and the
//!   position-to-dominant-BEM-index mapping.
//! * [`bem`]: complex-exponential basis expansion models, their
//!   frequency-domain basis matrices `D_q` and inverses `G_q`.
//! * [`channel`]: sparse single-Doppler channel synthesis and realization.
//! * [`ofdm`]: frames, QAM4 mapping, multi-cell reception, interference
//!   decomposition and zero-forcing detection.
//! * [`eliminator`]: position-based multi-cell and inter-carrier interference
//!   elimination.
//! * [`estimator`]: block compressed-sensing channel estimation (LS, OMP,
//!   BPDN) and MSE scoring.
//! * [`pilot_design`]: average coherence and the stochastic pilot pattern
//!   search.
//!
//! Everything here is `no_std` with `alloc`. IO, configuration and the
//! Monte Carlo harness live in the companion `hst-ofdm` crate.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod bem;
pub mod channel;
pub mod eliminator;
mod error;
pub mod estimator;
pub mod fft;
pub mod geometry;
pub mod ofdm;
pub mod pilot_design;

pub use error::{Error, Result};

/// Complex sample type used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<Complex>;
