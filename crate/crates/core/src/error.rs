use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample count must be at least {min}, got {got}")]
    SampleCount { min: usize, got: usize },

    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("dispersion must be non-negative, got {0}")]
    NegativeDispersion(f64),

    #[error("a point quantity cannot carry dispersion (got {0})")]
    PointWithDispersion(f64),

    #[error("quantile {0} is outside [0, 1]")]
    QuantileOutOfRange(f64),

    #[error("distribution has no samples")]
    EmptyDistribution,

    #[error("histogram needs at least one bin")]
    ZeroBins,

    #[error("anomaly total must be >= 0 under the adverse-positive sign convention, got {0}")]
    SignConvention(f64),

    #[error("anthropogenic component {anthropogenic} exceeds the anomaly total {total}")]
    AnthropogenicExceedsTotal { total: f64, anthropogenic: f64 },

    #[error("invalid response surface: {0}")]
    InvalidSurface(String),

    #[error("response surface covers [{lo}, {hi}] but {at} was requested")]
    DomainCoverage { lo: f64, hi: f64, at: f64 },

    #[error("quadrature failed to reach relative tolerance {tol:e} on [{a}, {b}]")]
    QuadratureDivergence { a: f64, b: f64, tol: f64 },

    #[error("quadrature ({quadrature}) and direct evaluation ({direct}) of {term} disagree")]
    CrossCheck {
        term: &'static str,
        direct: f64,
        quadrature: f64,
    },

    #[error("{0} requires a Normal quantity")]
    NotNormal(&'static str),

    #[error("expected units `{expected}`, got `{found}`")]
    Units { expected: &'static str, found: String },
}

pub(crate) fn ensure_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { field, value })
    }
}
