use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the numerical modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("parameter domain violation: {0}")]
    Domain(String),

    #[error("non-finite input `{0}`")]
    NonFinite(&'static str),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge in {context}: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature {
        context: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("no certified evaluation strategy: best a-priori error bound {bound:.3e}")]
    NotCertified { bound: f64 },

    #[error("tail truncation bound {bound:.3e} exceeds tolerance {tolerance:.3e}")]
    Truncation { bound: f64, tolerance: f64 },

    #[error("at sample {index} (omega = {omega:.6e} rad/s): {source}")]
    AtSample {
        index: usize,
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("not available: {0}")]
    Unavailable(&'static str),

    #[error("malformed table {path}, line {line}: {message}")]
    Table {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_sample(self, index: usize, omega: f64) -> Self {
        Error::AtSample {
            index,
            omega,
            source: Box::new(self),
        }
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}
