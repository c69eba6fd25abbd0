//! Monte Carlo harness for multi-cell high-speed-train OFDM channel
//! estimation: configuration, seeded trial streams, sweeps and CSV output.
//!
//! The numerics live in `hst_ofdm_core`; this crate wires them into
//! experiments and the `hst-ofdm` command-line tool.

pub mod config;
pub mod csv_out;
pub mod error;
pub mod experiments;
pub mod rng;
pub mod scenario;

pub use config::{ExperimentConfig, Scheme};
pub use csv_out::ResultRow;
pub use error::{HarnessError, Result};
pub use experiments::{run, DesignReport, Experiment};
