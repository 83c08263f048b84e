//! Annual weighted trade networks built from dyadic trade records, and the
//! statistics computed on them: degree, strength and disparity; log-binned
//! weight densities with power-law and log-normal fits; weight-ordered
//! percolation of the giant component; strength-ordered rich-club curves;
//! and a seeded gravity-model generator for synthetic panels.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything touching IO live in the companion `itn` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod distributions;
pub mod dsu;
pub mod metrics;
pub mod network;
pub mod percolation;
pub mod records;
pub mod regression;
pub mod richclub;
pub mod synth;

pub use error::{Error, Result};
pub use metrics::{Disparity, FlowKind, NodeMetrics};
pub use network::{AnnualTradeNetwork, Edge, EdgeWeights, MissingFlowPolicy, NetworkSummary};
pub use records::{CountryCode, DuplicatePolicy, DyadicRecord, PairedFlows};
