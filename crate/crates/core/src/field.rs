use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Real samples at the `n^3` grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    samples: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("scalar field"));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.len()],
        }
    }

    /// Samples `f(x, y, z)` at every node.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let n = grid.n();
        let mut samples = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    samples.push(f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(l)));
                }
            }
        }
        Self::new(grid, samples)
    }

    pub(crate) fn from_raw(grid: GridSpec, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Self { grid, samples }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Three real components sampled on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: GridSpec,
    components: [ScalarField; 3],
}

impl VectorField {
    pub fn new(components: [ScalarField; 3]) -> Result<Self> {
        let grid = *components[0].grid();
        if components.iter().any(|c| c.grid() != &grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, components })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            components: std::array::from_fn(|_| ScalarField::zeros(grid)),
        }
    }

    /// Samples a vector-valued `f(x, y, z)` at every node.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Result<Self> {
        let n = grid.n();
        let mut comps: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let v = f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(l));
                    for c in 0..3 {
                        comps[c].push(v[c]);
                    }
                }
            }
        }
        let [a, b, c] = comps;
        Self::new([
            ScalarField::new(grid, a)?,
            ScalarField::new(grid, b)?,
            ScalarField::new(grid, c)?,
        ])
    }

    pub(crate) fn from_raw(grid: GridSpec, comps: [Vec<f64>; 3]) -> Self {
        let [a, b, c] = comps;
        Self {
            grid,
            components: [
                ScalarField::from_raw(grid, a),
                ScalarField::from_raw(grid, b),
                ScalarField::from_raw(grid, c),
            ],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &ScalarField {
        &self.components[c]
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        let [a, b, c] = &self.components;
        let samples = a
            .samples()
            .iter()
            .zip(b.samples())
            .zip(c.samples())
            .map(|((x, y), z)| (x * x + y * y + z * z).sqrt())
            .collect();
        ScalarField::from_raw(self.grid, samples)
    }
}

/// Complex Fourier coefficients of a real vector field, indexed like the grid
/// (integer wavevector from [`GridSpec::wavevector`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    grid: GridSpec,
    modes: [Vec<Complex64>; 3],
}

impl SpectralVectorField {
    pub fn new(grid: GridSpec, modes: [Vec<Complex64>; 3]) -> Result<Self> {
        if modes.iter().any(|m| m.len() != grid.len()) {
            return Err(Error::InvalidArgument(format!(
                "each component needs {} modes",
                grid.len()
            )));
        }
        if modes.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("spectral field"));
        }
        Ok(Self { grid, modes })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            modes: std::array::from_fn(|_| vec![Complex64::default(); grid.len()]),
        }
    }

    pub(crate) fn from_raw(grid: GridSpec, modes: [Vec<Complex64>; 3]) -> Self {
        Self { grid, modes }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.modes[c]
    }

    pub fn modes(&self) -> &[Vec<Complex64>; 3] {
        &self.modes
    }

    pub(crate) fn modes_mut(&mut self) -> &mut [Vec<Complex64>; 3] {
        &mut self.modes
    }

    pub fn into_modes(self) -> [Vec<Complex64>; 3] {
        self.modes
    }

    pub fn is_finite(&self) -> bool {
        self.modes
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `sqrt(sum_k |f(k)|^2)` over all three components.
    pub fn mode_norm(&self) -> f64 {
        self.modes
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_mode(&self) -> f64 {
        self.modes
            .iter()
            .flatten()
            .fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Physical-space 2-norm recovered through Parseval:
    /// `|f|_2^2 = L^3 / n^6 * sum_k |f(k)|^2`.
    pub fn l2_norm(&self) -> f64 {
        let n3 = self.grid.len() as f64;
        self.mode_norm() * self.grid.volume().sqrt() / n3
    }

    /// `max_k |k . f(k)| / max_k |f(k)|`, integer wavevectors.
    pub fn divergence_defect(&self) -> f64 {
        let scale = self.max_mode();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for idx in 0..self.grid.len() {
            let k = self.grid.derivative_wavevector(idx);
            let d = self.modes[0][idx] * k[0] as f64
                + self.modes[1][idx] * k[1] as f64
                + self.modes[2][idx] * k[2] as f64;
            worst = worst.max(d.norm());
        }
        worst / scale
    }

    pub fn is_solenoidal(&self) -> bool {
        self.divergence_defect() <= crate::SOLENOIDAL_TOL
    }

    /// `max_k |f(-k) - conj f(k)| / max_k |f(k)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_mode();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for m in &self.modes {
            for (idx, z) in m.iter().enumerate() {
                let zc = m[self.grid.conjugate_index(idx)].conj();
                worst = worst.max((z - zc).norm());
            }
        }
        worst / scale
    }

    /// Magnitude of the `k = 0` coefficient vector.
    pub fn mean_mode(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m[0].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn zero_mean(&mut self) {
        for m in &mut self.modes {
            m[0] = Complex64::default();
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for z in out.modes.iter_mut().flatten() {
            *z *= factor;
        }
        out
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.modes.iter_mut().zip(&other.modes) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * factor;
            }
        }
        Ok(out)
    }

    /// Sum over modes of `conj(a) . b`, real part. Equals `n^6 / L^3` times the
    /// physical inner product.
    pub fn mode_inner(&self, other: &Self) -> f64 {
        self.modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum::<f64>())
            .sum()
    }

    /// Physical-space inner product `int f . g d^3x` through Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        let n3 = self.grid.len() as f64;
        self.mode_inner(other) * self.grid.volume() / (n3 * n3)
    }
}

/// Nine spectral components `d_i f_j`, stored as `modes[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGradient {
    grid: GridSpec,
    modes: [[Vec<Complex64>; 3]; 3],
}

impl SpectralGradient {
    pub(crate) fn from_raw(grid: GridSpec, modes: [[Vec<Complex64>; 3]; 3]) -> Self {
        Self { grid, modes }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Modes of `d f_j / d x_i`.
    pub fn component(&self, i: usize, j: usize) -> &[Complex64] {
        &self.modes[i][j]
    }

    pub fn mode_norm(&self) -> f64 {
        self.modes
            .iter()
            .flatten()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}
