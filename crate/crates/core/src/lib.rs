//! Pseudospectral vorticity-form Navier-Stokes on a periodic box, the norm
//! diagnostics consumed by explicit a priori vorticity estimates, and an
//! overflow-safe engine that evaluates those estimates along trajectories.

pub mod bounds;
pub mod diagnostics;
pub mod error;
mod fft;
pub mod field;
pub mod grid;
pub mod logscalar;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{ScalarField, SpectralGradient, SpectralVectorField, VectorField};
pub use grid::{make_grid, GridSpec};
pub use logscalar::LogScalar;
pub use rustfft::num_complex::Complex64;

/// Relative tolerance on `max_k |k . f(k)|` for a field to count as solenoidal.
pub const SOLENOIDAL_TOL: f64 = 1e-10;
