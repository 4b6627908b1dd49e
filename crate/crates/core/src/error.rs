use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("network has no receivers")]
    EmptyNetwork,

    #[error("receiver index {index} out of range for a network of {len}")]
    ReceiverIndex { index: usize, len: usize },

    #[error(
        "{context}: quadrature did not converge after {intervals} intervals \
         (partial value {partial:.6e}, last correction {last_correction:.3e})"
    )]
    Quadrature {
        context: &'static str,
        intervals: usize,
        partial: f64,
        last_correction: f64,
    },

    #[error("best-response dynamics did not converge in {sweeps} sweeps (max residual {max_residual:.3e} ohm)")]
    NotConverged {
        sweeps: usize,
        max_residual: f64,
        loads: Vec<f64>,
        residuals: Vec<f64>,
    },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects anything that is not a finite, strictly positive number.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(invalid(
            name,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}
