use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge (best estimate {value:e}, error estimate {abs_error:e})")]
    QuadratureNonConvergence { value: f64, abs_error: f64 },

    #[error("series did not converge after {terms} terms (partial sum {value:e})")]
    SeriesNonConvergence { value: f64, terms: u64 },

    #[error("series terms exceed the ratio bound {ratio_bound} near n = {n}")]
    RatioBoundViolated { ratio_bound: f64, n: u64 },

    #[error("loss of precision: {0}")]
    PrecisionLoss(String),

    #[error("singular linear system: {0}")]
    Singular(&'static str),
}

/// Rejects NaN and infinities.
pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}

pub(crate) fn tolerance(value: f64) -> Result<f64> {
    positive("tol", value)
}
