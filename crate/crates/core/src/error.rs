use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not reach tolerance {tolerance:e} after {intervals} intervals (error estimate {estimate:e})")]
    QuadratureNotConverged {
        tolerance: f64,
        intervals: usize,
        estimate: f64,
    },

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("conversion fixed point did not converge (residual {residual:e})")]
    FixedPointNotConverged { residual: f64 },

    #[error("intensity ratio undefined: second-pass conversion efficiency is zero")]
    UndefinedIntensityRatio,

    #[error("complex coupling (phase mismatch {dk} 1/m) mixes quadratures and is not supported")]
    ComplexCoupling { dk: f64 },

    #[error("cavity resolvent is singular (condition number {condition:e})")]
    SingularResolvent { condition: f64 },

    #[error("closed-form coefficients require T21 = T22 = 1, L23 = L24 = 0, T12 = 0 ({0}); use the general solver")]
    RestrictionViolated(String),

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg()))
    }
}
