use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("starting point {0:?} is not inside the domain")]
    PointOutsideDomain(Vec<f64>),

    #[error("quadrature did not converge: achieved error bound {error_bound:e} exceeds tolerance {tolerance:e} (value {value})")]
    QuadratureNotConverged {
        value: f64,
        error_bound: f64,
        tolerance: f64,
    },

    #[error("rejection sampler exceeded {0} iterations")]
    RejectionCapExceeded(usize),

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("degenerate oscillation profile: {0}")]
    DegenerateProfile(String),

    #[error("infeasible exponent budget: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `lo < value < hi`.
pub(crate) fn ensure_open(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value > lo && value < hi {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("{value} is outside the open interval ({lo}, {hi})"),
        ))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{value} must be positive and finite")))
    }
}
