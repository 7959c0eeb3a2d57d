use thiserror::Error;

/// Errors produced by decomposition, segmentation and harness routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Not enough spectral peaks (or peak candidates) to place the requested
    /// number of segments.
    #[error("segmentation infeasible: {requested} segments need {needed} peak candidates, found {found}")]
    SegmentationInfeasible {
        requested: usize,
        needed: usize,
        found: usize,
    },

    #[error("invalid segmentation: {0}")]
    InvalidSegmentation(String),

    #[error("segment {segment} of the filter bank contains no spectrum bins")]
    EmptyBand { segment: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
