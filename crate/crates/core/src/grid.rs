use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on the cube `[0, L)^3`.
///
/// Storage is row-major with `z` fastest: node `(i, j, l)` lives at
/// `(i * n + j) * n + l`, with `i` along `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    length: f64,
    dealias_fraction: f64,
}

pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;

/// Builds a grid with the default 2/3 dealiasing fraction.
pub fn make_grid(n: usize, length: f64) -> Result<GridSpec> {
    GridSpec::new(n, length, DEFAULT_DEALIAS_FRACTION)
}

impl GridSpec {
    pub fn new(n: usize, length: f64, dealias_fraction: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive, got {length}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(Self {
            n,
            length,
            dealias_fraction,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Volume of one grid cell, the quadrature weight of every node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(3)
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 2π/L, the physical wavenumber of integer mode 1.
    pub fn base_wavenumber(&self) -> f64 {
        2.0 * PI / self.length
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n + j) * self.n + l
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    /// Signed integer wavenumber for array position `i` (Nyquist reported as `+n/2`).
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Integer wavenumber used by odd-order derivatives: the Nyquist mode has
    /// no real-valued first derivative and is mapped to zero.
    #[inline]
    pub fn derivative_wavenumber(&self, i: usize) -> i64 {
        if i == self.n / 2 {
            0
        } else {
            self.wavenumber(i)
        }
    }

    /// Integer wavevector at flat index `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let (i, j, l) = self.unravel(idx);
        [self.wavenumber(i), self.wavenumber(j), self.wavenumber(l)]
    }

    #[inline]
    pub fn derivative_wavevector(&self, idx: usize) -> [i64; 3] {
        let (i, j, l) = self.unravel(idx);
        [
            self.derivative_wavenumber(i),
            self.derivative_wavenumber(j),
            self.derivative_wavenumber(l),
        ]
    }

    /// Flat index of the mode `-k` for the mode stored at `idx`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j, l) = self.unravel(idx);
        self.index((n - i) % n, (n - j) % n, (n - l) % n)
    }

    /// Largest integer wavenumber per axis that survives dealiasing.
    pub fn dealias_cutoff(&self) -> f64 {
        self.dealias_fraction * (self.n / 2) as f64
    }

    /// Physical coordinate of node position `i` along any axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }
}
