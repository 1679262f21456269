use thiserror::Error;

use crate::domain::LinearForm;
use crate::rational::Q;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error("form {form} is constant on boundary edge {edge}")]
    DegenerateEdge { form: LinearForm, edge: usize },
    #[error("threshold {value} lies on the action spectrum")]
    SpectrumBoundary { value: Q },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("truncation diagnostic failed: {0}")]
    Truncation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidProfile(_) => "invalid-domain",
            Error::InvalidThreshold(_) => "invalid-threshold",
            Error::DegenerateEdge { .. } => "degenerate-edge",
            Error::SpectrumBoundary { .. } => "spectrum-boundary",
            Error::Contract(_) => "contract",
            Error::Truncation(_) => "truncation",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
