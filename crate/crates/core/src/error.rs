use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A square root argument went negative; the value is carried so callers can see how far off it was.
    #[error("negative radicand {radicand} in {context}")]
    NegativeRadicand { context: &'static str, radicand: f64 },

    #[error("{0}")]
    Domain(String),

    /// The partition function has a pole at δ = 1 (order 2 in 1 − δ).
    #[error("partition function diverges at delta = {delta} (pole of order {pole_order} in 1 - delta)")]
    Divergent { delta: f64, pole_order: u32 },

    #[error("special case {case} does not apply: {reason}")]
    InvalidCase { case: &'static str, reason: String },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("series did not converge within {cap} terms (partial sum {partial:e})")]
    SeriesCap { cap: u64, partial: f64 },

    #[error("finite-difference derivative is noise dominated near {at}")]
    DerivativeNoise { at: f64 },

    #[error("structural: {0}")]
    Structural(String),

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    /// Short machine-readable category, used as the `error[category]:` prefix by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::NegativeRadicand { .. } | Error::Domain(_) => "domain",
            Error::Divergent { .. } => "divergent",
            Error::InvalidCase { .. } => "invalid-case",
            Error::Quadrature { .. } | Error::SeriesCap { .. } | Error::DerivativeNoise { .. } => {
                "numerical"
            }
            Error::Structural(_) => "structural",
            Error::UnknownStrategy { .. } => "usage",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// `√x`, or a [`Error::NegativeRadicand`] when `x < 0`.
pub(crate) fn checked_sqrt(radicand: f64, context: &'static str) -> Result<f64> {
    if radicand < 0.0 || radicand.is_nan() {
        Err(Error::NegativeRadicand { context, radicand })
    } else {
        Ok(radicand.sqrt())
    }
}
