//! Bound tables and verification reports for the wedge sphere-packing
//! bound, plus record comparisons and plot data. Estimators run on rayon.

pub mod bounds;
pub mod cli;
mod error;
pub mod numfmt;
pub mod parallel;
pub mod plot;
pub mod records;
pub mod report;

pub use error::CliError;
pub use parallel::Parallel;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default Monte-Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Sample count selected by `--precision`.
pub const PRECISION_SAMPLES: u64 = 100_000_000;
pub const MIN_SAMPLES: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
