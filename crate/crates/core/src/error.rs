//! Error type shared by all modules.

use thiserror::Error;

/// Errors emitted by state constructors, operator algebra, and detection models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon number {n} exceeds the truncation n_max = {n_max}")]
    NumberOutOfRange { n: usize, n_max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("truncation at n_max = {n_max} leaves tail mass {tail_mass:.3e}, above the {limit:.1e} limit")]
    TruncationTail {
        n_max: usize,
        tail_mass: f64,
        limit: f64,
    },

    #[error("n_max = {n_max} is below the required truncation {required}")]
    TruncationTooSmall { n_max: usize, required: usize },

    #[error("matrix is not Hermitian: max |M - M^H| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix exponential did not reach tolerance {tol:.1e} (last term norm {residual:.3e})")]
    ExpNotConverged { tol: f64, residual: f64 },

    #[error("series not converged at k_max = {k_max} (last term magnitude {last_term:.3e})")]
    SeriesNotConverged { k_max: usize, last_term: f64 },

    #[error("amplitudes must be finite")]
    NonFinite,

    #[error("vacuum input rejected: <n> = 0 leaves the estimator normalization undefined")]
    VacuumInput,

    #[error("mode scale is missing {0}")]
    MissingPhysical(&'static str),

    #[error("invalid splitter coefficients: {0}")]
    InvalidSplitter(String),

    #[error("state carries mass {mass:.3e} in the top quarter of the basis (from index {index})")]
    TopOfBasis { mass: f64, index: usize },

    #[error("invalid phase grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
