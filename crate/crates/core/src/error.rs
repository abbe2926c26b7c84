//! Crate-level error type.

use thiserror::Error;

use crate::hecke::HeckeError;
use crate::quiver::QuiverError;
use crate::scalars::ScalarError;
use crate::series::SeriesError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// True when the failure is a precision shortfall that a wider window may fix.
    pub fn is_precision(&self) -> bool {
        match self {
            Error::Series(e) => e.is_precision(),
            Error::Hecke(HeckeError::Series(e)) => e.is_precision(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
