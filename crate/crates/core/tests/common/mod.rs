#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use vortbound::spectral::{forward_transform, inverse_transform, project_solenoidal};
use vortbound::{make_grid, GridSpec, SpectralVectorField, VectorField};

pub fn grid(n: usize) -> GridSpec {
    make_grid(n, 2.0 * PI).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// ABC flow with `A = B = C = 1`.
pub fn abc(g: GridSpec) -> SpectralVectorField {
    let f = VectorField::from_fn(g, |x, y, z| {
        [z.sin() + y.cos(), x.sin() + z.cos(), y.sin() + x.cos()]
    })
    .unwrap();
    forward_transform(&f).unwrap()
}

/// Vorticity of `u = (sin x cos y cos z, -cos x sin y cos z, 0)`.
pub fn taylor_green(g: GridSpec) -> SpectralVectorField {
    let f = VectorField::from_fn(g, |x, y, z| {
        [
            -x.cos() * y.sin() * z.sin(),
            -x.sin() * y.cos() * z.sin(),
            2.0 * x.sin() * y.sin() * z.cos(),
        ]
    })
    .unwrap();
    forward_transform(&f).unwrap()
}

/// Real field built from random plane waves with integer wavevectors of
/// size at most `kmax`, projected solenoidal with zero mean.
pub fn random_solenoidal(g: GridSpec, seed: u64, kmax: i64, waves: usize) -> SpectralVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(waves);
    while terms.len() < waves {
        let k: [i64; 3] = std::array::from_fn(|_| rng.random_range(-kmax..=kmax));
        let k2 = k.iter().map(|v| v * v).sum::<i64>();
        if k2 == 0 || k2 > kmax * kmax {
            continue;
        }
        let amp: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let phase = rng.random_range(0.0..2.0 * PI);
        terms.push((k, amp, phase));
    }
    let f = VectorField::from_fn(g, |x, y, z| {
        let mut v = [0.0; 3];
        for (k, amp, phase) in &terms {
            let arg = k[0] as f64 * x + k[1] as f64 * y + k[2] as f64 * z + phase;
            let c = arg.cos();
            for i in 0..3 {
                v[i] += amp[i] * c;
            }
        }
        v
    })
    .unwrap();
    let mut w = project_solenoidal(&forward_transform(&f).unwrap());
    w.zero_mean();
    w
}

/// Physical samples of every component.
pub fn physical(w: &SpectralVectorField) -> [Vec<f64>; 3] {
    let f = inverse_transform(w).unwrap();
    std::array::from_fn(|c| f.component(c).samples().to_vec())
}

/// Physical samples of `d_i f_j`, indexed `[i][j]`.
pub fn physical_gradient(w: &SpectralVectorField) -> [[Vec<f64>; 3]; 3] {
    let g = vortbound::spectral::gradient(w);
    std::array::from_fn(|i| {
        let row = SpectralVectorField::new(
            *w.grid(),
            std::array::from_fn(|j| g.component(i, j).to_vec()),
        )
        .unwrap();
        physical(&row)
    })
}
