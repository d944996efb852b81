//! Attribution of excess outcome risk to the natural and anthropogenic
//! components of a climate anomaly.
//!
//! The crate is organised in three layers:
//!
//! * [`uq`]: uncertain scalars, counter-based sampling and empirical
//!   distribution statistics (percentiles, box-whisker summaries, tail
//!   probabilities, histograms).
//! * [`attribution`]: anomaly decomposition, linear and response-surface
//!   relative-risk attribution, and Monte Carlo propagation of input
//!   uncertainty into a distribution of attributable risk.
//! * [`scenario`]: declarative scenario files, report bundles and their
//!   text / CSV / JSON renderings.
//!
//! Monte Carlo work runs on rayon when the `parallel` feature is enabled
//! (the default). Every draw is a pure function of `(seed, stream, index)`,
//! so sequential and parallel runs produce bit-identical results.

pub mod attribution;
mod error;
pub mod exec;
pub mod scenario;
pub mod selftest;
pub mod uq;

pub use error::{Error, Result};
pub use exec::Execution;

/// Seed used when neither the scenario nor the caller provides one.
pub const DEFAULT_SEED: u64 = 20_150_302;

/// Monte Carlo sample count used when none is configured.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// Version string recorded in report provenance.
pub const TOOL_VERSION: &str = concat!("attrisk ", env!("CARGO_PKG_VERSION"));
