//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or model function received a value outside its domain.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// A geometric or analytic precondition failed (e.g. slant distance
    /// shorter than the flight altitude).
    #[error("domain error: {0}")]
    Domain(String),

    /// A device cannot finish its upload under the given link (rate is zero).
    #[error("infeasible link: {0}")]
    InfeasibleLink(String),

    /// Configuration file or value problem; the message names the key.
    #[error("config error: {0}")]
    Config(String),

    /// An operation that needs archive entries was called on an empty archive.
    #[error("archive is empty")]
    EmptyArchive,

    /// The exhaustive enumerator would exceed its evaluation cap.
    #[error("enumeration of {combinations} combinations exceeds the cap of {cap}")]
    EnumerationCap { combinations: u128, cap: u64 },

    /// A hypervolume reference point that does not bound the front.
    #[error("reference point {reference:?} is not dominated by front point {point:?}")]
    BadReference { point: [f64; 3], reference: [f64; 3] },

    /// Comparison input whose run sets cannot be paired one-to-one.
    #[error("unpaired comparison: {0}")]
    Unpaired(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    TomlParse(#[from] toml::de::Error),

    #[error("config serialize error: {0}")]
    TomlWrite(#[from] toml::ser::Error),

    #[error("archive dump parse error: {0}")]
    DumpParse(String),
}

impl Error {
    pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
