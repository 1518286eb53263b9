//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the gadget simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad qubit counts, out-of-range indices, bad flags).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A caller violated an operation contract (non-Hermitian input, mismatched states).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerical check failed beyond tolerance (norm drift, unitarity loss,
    /// failed analytic cross-check).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Gadget calibration is impossible because the subspace ordering would invert.
    #[error("calibration requires gamma > alpha, got gamma = {gamma}, alpha = {alpha}")]
    Calibration { gamma: f64, alpha: f64 },

    /// A metric is undefined at the requested point (e.g. vanishing survival probability).
    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    /// An experiment spec file failed to parse or validate. The message names the field.
    #[error("invalid experiment spec: {0}")]
    Spec(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("toml parse error: {0}")]
    TomlParse(#[from] toml::de::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
