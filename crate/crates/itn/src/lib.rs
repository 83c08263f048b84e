//! Files and command-line front end for `itn-core`: dyadic-record ingest,
//! JSON network snapshots, result tables and run manifests.

pub mod cli;
mod error;
pub mod ingest;
pub mod output;
pub mod snapshot;
pub mod tables;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
