use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {d} is below {min}, the smallest dimension where {what} is defined")]
    Dimension { d: usize, min: usize, what: &'static str },

    #[error("dimension {d} exceeds {max} ({what})")]
    DimensionTooLarge { d: usize, max: usize, what: &'static str },

    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{name}: radicand {value} is not positive")]
    Radicand { name: &'static str, value: f64 },

    #[error("invalid chain: {0}")]
    Chain(String),

    #[error("inadmissible domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("quadrature refinements differ by {diff:e}, tolerance {tol:e}")]
    Quadrature { diff: f64, tol: f64 },

    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),
}
