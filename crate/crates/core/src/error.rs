use alloc::string::String;

use crate::records::CountryCode;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("network has no edges")]
    EmptyNetwork,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("country {0} is not in the network")]
    NotFound(CountryCode),
    #[error("insufficient data: need at least {needed} {what}, found {found}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("duplicate year {0}")]
    DuplicateYear(i32),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn insufficient(what: &'static str, needed: usize, found: usize) -> Self {
        Error::InsufficientData {
            what,
            needed,
            found,
        }
    }
}
