//! Experiment harness, file formats and lattice cache on top of
//! [`latapprox_core`].
//!
//! * [`spec`] parses method strings such as `erf:eta=2.5` and `N` ranges
//!   such as `1..81:2`.
//! * [`experiments`] runs error sweeps and fits decay rates.
//! * [`formats`] reads and writes frequency sets and approximants.
//! * [`cache`] persists verified lattices as JSON lines.

pub mod cache;
pub mod experiments;
pub mod formats;
pub mod spec;

pub use latapprox_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] latapprox_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate reference: the reference values have zero norm")]
    DegenerateReference,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
