use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("spectral data is not Hermitian (relative imaginary residue {0:.3e})")]
    NotHermitian(f64),

    #[error("mean vorticity mode is nonzero ({0:.3e}); velocity is undefined on the torus")]
    NonzeroMean(f64),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid interval: {0}")]
    Interval(String),

    #[error("solution blew up at t = {t} (last finite state at t = {last_finite_t})")]
    BlowUp { t: f64, last_finite_t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
