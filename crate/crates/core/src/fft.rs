//! Three-dimensional complex FFT built from rustfft 1D plans.
//!
//! Convention: forward is unnormalized, inverse carries the `1/n^3` factor.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft3 {
    n: usize,
    conj: Vec<usize>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    // transpose buffer and FFT scratch, reused across calls on this thread
    static WORK: RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

fn plan_cache() -> &'static Mutex<HashMap<usize, Arc<Fft3>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Fft3>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn conjugate_table(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                out.push((((n - i) % n) * n + (n - j) % n) * n + (n - l) % n);
            }
        }
    }
    out
}

impl Fft3 {
    pub(crate) fn for_size(n: usize) -> Arc<Fft3> {
        let mut cache = plan_cache().lock().unwrap_or_else(|p| p.into_inner());
        cache
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                let conj = conjugate_table(n);
                Arc::new(Fft3 {
                    n,
                    conj,
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    }

    /// Unnormalized forward transform in place.
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.process(data, Direction::Forward);
    }

    /// Inverse transform in place, including the `1/n^3` normalization.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.process(data, Direction::Inverse);
        let scale = 1.0 / (self.n * self.n * self.n) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn process(&self, data: &mut [Complex64], dir: Direction) {
        WORK.with(|w| {
            let (buf, scratch) = &mut *w.borrow_mut();
            self.process_with(data, dir, buf, scratch);
        });
    }

    fn process_with(
        &self,
        data: &mut [Complex64],
        dir: Direction,
        buf: &mut Vec<Complex64>,
        scratch: &mut Vec<Complex64>,
    ) {
        let n = self.n;
        let plane = n * n;
        assert_eq!(data.len(), plane * n);
        let fft = match dir {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        };
        scratch.resize(fft.get_inplace_scratch_len(), Complex64::default());
        buf.resize(data.len(), Complex64::default());
        let (buf, scratch) = (&mut buf[..], &mut scratch[..]);

        // z: contiguous rows
        fft.process_with_scratch(data, scratch);

        // y: transpose each (j, l) plane
        for (p, dst) in data.chunks_mut(plane).zip(buf.chunks_mut(plane)) {
            for j in 0..n {
                for l in 0..n {
                    dst[l * n + j] = p[j * n + l];
                }
            }
        }
        fft.process_with_scratch(buf, scratch);
        for (p, src) in data.chunks_mut(plane).zip(buf.chunks(plane)) {
            for l in 0..n {
                for j in 0..n {
                    p[j * n + l] = src[l * n + j];
                }
            }
        }

        // x: full transpose so that i is fastest
        for (r, row) in buf.chunks_mut(n).enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = data[i * plane + r];
            }
        }
        fft.process_with_scratch(buf, scratch);
        for (i, p) in data.chunks_mut(plane).enumerate() {
            for (r, v) in p.iter_mut().enumerate() {
                *v = buf[r * n + i];
            }
        }
    }
}

/// Inverse-transforms two Hermitian spectra with one complex FFT.
pub(crate) fn inverse_pair(
    fft: &Fft3,
    a: &[Complex64],
    b: &[Complex64],
) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| x + i * y).collect();
    fft.inverse(&mut buf);
    buf.iter().map(|z| (z.re, z.im)).unzip()
}

/// Forward-transforms two real fields with one complex FFT.
pub(crate) fn forward_pair(
    fft: &Fft3,
    a: &[f64],
    b: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut buf: Vec<Complex64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    fft.forward(&mut buf);
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let mut fa = Vec::with_capacity(buf.len());
    let mut fb = Vec::with_capacity(buf.len());
    for (k, z) in buf.iter().enumerate() {
        let zc = buf[fft.conj[k]].conj();
        fa.push((z + zc) * half);
        fb.push((z - zc) * minus_half_i);
    }
    (fa, fb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(n: usize, data: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); data.len()];
        let w = -2.0 * std::f64::consts::PI / n as f64;
        for (ko, o) in out.iter_mut().enumerate() {
            let (ki, kj, kl) = (ko / (n * n), (ko / n) % n, ko % n);
            for (xo, v) in data.iter().enumerate() {
                let (xi, xj, xl) = (xo / (n * n), (xo / n) % n, xo % n);
                let phase = w * ((ki * xi + kj * xj + kl * xl) % n) as f64;
                *o += v * Complex64::from_polar(1.0, phase);
            }
        }
        out
    }

    #[test]
    fn matches_direct_sum() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let expected = naive_dft(n, &data);
        let mut got = data.clone();
        let fft = Fft3::for_size(n);
        fft.forward(&mut got);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-10);
        }
        fft.inverse(&mut got);
        for (a, b) in got.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
