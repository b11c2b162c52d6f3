//! Transforms and differential operators on the periodic box.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{self, Fft3};
use crate::field::{SpectralGradient, SpectralVectorField, VectorField};
use crate::grid::GridSpec;

/// Relative tolerance on Hermitian symmetry accepted by [`inverse_transform`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative tolerance on the mean vorticity mode accepted by Biot-Savart.
pub const MEAN_MODE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn forward_transform(field: &VectorField) -> Result<SpectralVectorField> {
    let grid = *field.grid();
    let comps = field.components();
    if comps.iter().any(|c| c.samples().iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFinite("physical field"));
    }
    let [a, b, c] = comps;
    Ok(from_physical(
        &grid,
        [a.samples(), b.samples(), c.samples()],
    ))
}

pub fn inverse_transform(modes: &SpectralVectorField) -> Result<VectorField> {
    if !modes.is_finite() {
        return Err(Error::NonFinite("spectral field"));
    }
    let defect = modes.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(VectorField::from_raw(*modes.grid(), to_physical(modes)))
}

/// Transforms three real component arrays without validation.
pub(crate) fn from_physical(grid: &GridSpec, comps: [&[f64]; 3]) -> SpectralVectorField {
    let mut out = forward_many(grid, &comps).into_iter();
    let modes = std::array::from_fn(|_| out.next().unwrap_or_default());
    SpectralVectorField::from_raw(*grid, modes)
}

/// Inverse transform of a Hermitian field without validation.
pub(crate) fn to_physical(modes: &SpectralVectorField) -> [Vec<f64>; 3] {
    let m = modes.modes();
    let mut out = inverse_many(modes.grid(), &[&m[0], &m[1], &m[2]]);
    let c = out.pop().unwrap_or_default();
    let b = out.pop().unwrap_or_default();
    let a = out.pop().unwrap_or_default();
    [a, b, c]
}

/// Inverse-transforms a batch of Hermitian spectra, two per complex FFT.
pub(crate) fn inverse_many(grid: &GridSpec, spectra: &[&[Complex64]]) -> Vec<Vec<f64>> {
    let fft = Fft3::for_size(grid.n());
    let mut out = Vec::with_capacity(spectra.len());
    for pair in spectra.chunks(2) {
        match pair {
            [a, b] => {
                let (x, y) = fft::inverse_pair(&fft, a, b);
                out.push(x);
                out.push(y);
            }
            [a] => {
                let zero = vec![Complex64::default(); a.len()];
                let (x, _) = fft::inverse_pair(&fft, a, &zero);
                out.push(x);
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Forward-transforms a batch of real fields, two per complex FFT.
pub(crate) fn forward_many(grid: &GridSpec, fields: &[&[f64]]) -> Vec<Vec<Complex64>> {
    let fft = Fft3::for_size(grid.n());
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [a, b] => {
                let (x, y) = fft::forward_pair(&fft, a, b);
                out.push(x);
                out.push(y);
            }
            [a] => {
                let zero = vec![0.0; a.len()];
                let (x, _) = fft::forward_pair(&fft, a, &zero);
                out.push(x);
            }
            _ => unreachable!(),
        }
    }
    out
}

pub fn gradient(modes: &SpectralVectorField) -> SpectralGradient {
    let grid = *modes.grid();
    let k0 = grid.base_wavenumber();
    let mut out: [[Vec<Complex64>; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| Vec::with_capacity(grid.len())));
    for idx in 0..grid.len() {
        let k = grid.derivative_wavevector(idx);
        for (i, row) in out.iter_mut().enumerate() {
            let factor = I * (k0 * k[i] as f64);
            for (j, dst) in row.iter_mut().enumerate() {
                dst.push(factor * modes.component(j)[idx]);
            }
        }
    }
    SpectralGradient::from_raw(grid, out)
}

/// Physical samples of all nine gradient components, `out[i][j] = d_i f_j`.
pub(crate) fn gradient_physical(modes: &SpectralVectorField) -> [[Vec<f64>; 3]; 3] {
    let g = gradient(modes);
    let refs: Vec<&[Complex64]> = (0..9).map(|c| g.component(c / 3, c % 3)).collect();
    let mut flat = inverse_many(modes.grid(), &refs).into_iter();
    std::array::from_fn(|_| std::array::from_fn(|_| flat.next().unwrap_or_default()))
}

pub fn curl(modes: &SpectralVectorField) -> SpectralVectorField {
    let grid = *modes.grid();
    let k0 = grid.base_wavenumber();
    let f = modes.modes();
    let mut out: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
    for idx in 0..grid.len() {
        let k = grid.derivative_wavevector(idx).map(|v| v as f64 * k0);
        let (a, b, c) = (f[0][idx], f[1][idx], f[2][idx]);
        out[0].push(I * (b * -k[2] + c * k[1]));
        out[1].push(I * (c * -k[0] + a * k[2]));
        out[2].push(I * (a * -k[1] + b * k[0]));
    }
    SpectralVectorField::from_raw(grid, out)
}

/// Spectral divergence `i k . f(k)` (physical wavenumbers).
pub fn divergence(modes: &SpectralVectorField) -> Vec<Complex64> {
    let grid = *modes.grid();
    let k0 = grid.base_wavenumber();
    let f = modes.modes();
    (0..grid.len())
        .map(|idx| {
            let k = grid.derivative_wavevector(idx);
            I * k0 * (f[0][idx] * k[0] as f64 + f[1][idx] * k[1] as f64 + f[2][idx] * k[2] as f64)
        })
        .collect()
}

/// Leray projection `f - k (k . f) / |k|^2` on every `k != 0`.
pub fn project_solenoidal(modes: &SpectralVectorField) -> SpectralVectorField {
    let mut out = modes.clone();
    project_in_place(&mut out);
    out
}

pub(crate) fn project_in_place(field: &mut SpectralVectorField) {
    let grid = *field.grid();
    let f = field.modes_mut();
    for idx in 0..grid.len() {
        let k = grid.derivative_wavevector(idx).map(|v| v as f64);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let dot = (f[0][idx] * k[0] + f[1][idx] * k[1] + f[2][idx] * k[2]) / k2;
        for c in 0..3 {
            f[c][idx] -= dot * k[c];
        }
    }
}

/// Velocity from vorticity: `u(k) = i k x w(k) / |k|^2`, `u(0) = 0`.
pub fn biot_savart_velocity(omega: &SpectralVectorField) -> Result<SpectralVectorField> {
    let scale = omega.mode_norm();
    let mean = omega.mean_mode();
    if mean > MEAN_MODE_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonzeroMean(mean / scale));
    }
    Ok(biot_savart_unchecked(omega))
}

pub(crate) fn biot_savart_unchecked(omega: &SpectralVectorField) -> SpectralVectorField {
    let grid = *omega.grid();
    let k0 = grid.base_wavenumber();
    let f = omega.modes();
    let mut out: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
    for idx in 0..grid.len() {
        let k = grid.derivative_wavevector(idx).map(|v| v as f64);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            for o in &mut out {
                o.push(Complex64::default());
            }
            continue;
        }
        let s = I / (k2 * k0);
        let (a, b, c) = (f[0][idx], f[1][idx], f[2][idx]);
        out[0].push(s * (b * -k[2] + c * k[1]));
        out[1].push(s * (c * -k[0] + a * k[2]));
        out[2].push(s * (a * -k[1] + b * k[0]));
    }
    SpectralVectorField::from_raw(grid, out)
}

/// Zeroes every mode with some `|k_i|` above the dealiasing cutoff.
pub fn dealias(modes: &SpectralVectorField) -> SpectralVectorField {
    let mut out = modes.clone();
    let grid = *out.grid();
    for m in out.modes_mut() {
        dealias_slice(&grid, m);
    }
    out
}

pub(crate) fn dealias_slice(grid: &GridSpec, m: &mut [Complex64]) {
    let cutoff = grid.dealias_cutoff();
    for (idx, z) in m.iter_mut().enumerate() {
        let k = grid.wavevector(idx);
        if k.iter().any(|&v| v.unsigned_abs() as f64 > cutoff) {
            *z = Complex64::default();
        }
    }
}
