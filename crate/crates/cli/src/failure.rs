use std::io;
use std::path::Path;

use efdkit::Error;

pub const USAGE: u8 = 2;
pub const INVALID_INPUT: u8 = 3;
pub const INFEASIBLE: u8 = 4;
pub const NUMERIC: u8 = 5;

/// A message and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub type Outcome<T> = Result<T, Failure>;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: INVALID_INPUT,
            message: message.into(),
        }
    }

    /// Output could not be written.
    pub fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: NUMERIC,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => INVALID_INPUT,
            Error::SegmentationInfeasible { .. } | Error::InvalidSegmentation(_) | Error::EmptyBand { .. } => {
                INFEASIBLE
            }
            Error::Numeric(_) => NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}
