use thiserror::Error;

/// Errors produced by model construction, state preparation, and sweeps.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("cavity index {index} out of range 1..={limit}")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("time must be finite, got {0}")]
    NonFiniteTime(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error(
        "closed-form and oracle maxima disagree at N={n_cavities}, r={r}, s={s}, \
         theta={theta}, phi={phi}: {closed_form} vs {oracle}"
    )]
    RouteMismatch {
        n_cavities: usize,
        r: usize,
        s: usize,
        theta: f64,
        phi: f64,
        closed_form: f64,
        oracle: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
