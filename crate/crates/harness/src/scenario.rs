//! Initial vorticity for the bundled scenarios.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use vortbound::solver::FlowState;
use vortbound::spectral::{curl, dealias, forward_transform, project_solenoidal};
use vortbound::{Complex64, GridSpec, SpectralVectorField, VectorField};

use crate::config::{ScenarioConfig, ScenarioName};
use crate::error::{HarnessError, Result};

/// Largest wavevector length carrying energy in the random scenario.
pub const RANDOM_SHELL: f64 = 4.0;
/// Core radius of each tube in the vortex pair, in units of `L / 2 pi`.
pub const PAIR_CORE: f64 = 0.6;
/// Half the separation between the two tubes, same units.
pub const PAIR_OFFSET: f64 = 0.9;
/// Amplitude of the sinusoidal axial displacement of the tubes.
pub const PAIR_WOBBLE: f64 = 0.15;

/// Solenoidal, mean-free initial state at `t = 0`.
pub fn init_scenario(config: &ScenarioConfig) -> Result<FlowState> {
    config.validate()?;
    let grid = config.grid()?;
    let raw = match config.scenario {
        ScenarioName::TaylorGreen => taylor_green(grid)?,
        ScenarioName::BeltramiAbc => beltrami_abc(grid)?,
        ScenarioName::RandomSolenoidal => {
            let seed = config
                .seed
                .ok_or_else(|| HarnessError::Config("random_solenoidal needs a seed".into()))?;
            random_solenoidal(grid, seed)?
        }
        ScenarioName::GaussianVortexPair => vortex_pair(grid)?,
    };
    let mut omega = project_solenoidal(&raw);
    omega.zero_mean();
    if config.dealias {
        omega = dealias(&omega);
    }
    let omega = match config.scenario {
        ScenarioName::RandomSolenoidal => {
            let rms = omega.l2_norm() / grid.volume().sqrt();
            if rms > 0.0 {
                omega.scaled(config.amplitude / rms)
            } else {
                omega
            }
        }
        _ => omega.scaled(config.amplitude),
    };
    Ok(FlowState::new(0.0, omega)?)
}

/// Curl of `u = (sin x cos y cos z, -cos x sin y cos z, 0)`.
fn taylor_green(grid: GridSpec) -> Result<SpectralVectorField> {
    let k0 = grid.base_wavenumber();
    let u = VectorField::from_fn(grid, |x, y, z| {
        let (x, y, z) = (k0 * x, k0 * y, k0 * z);
        [
            x.sin() * y.cos() * z.cos(),
            -x.cos() * y.sin() * z.cos(),
            0.0,
        ]
    })?;
    Ok(curl(&forward_transform(&u)?))
}

/// ABC flow with `A = B = C = 1`, an eigenfield of the curl.
fn beltrami_abc(grid: GridSpec) -> Result<SpectralVectorField> {
    let k0 = grid.base_wavenumber();
    let w = VectorField::from_fn(grid, |x, y, z| {
        let (x, y, z) = (k0 * x, k0 * y, k0 * z);
        [z.sin() + y.cos(), x.sin() + z.cos(), y.sin() + x.cos()]
    })?;
    Ok(forward_transform(&w)?)
}

/// First nonzero component positive: one representative of each `+-k` pair.
fn upper_half(k: [i64; 3]) -> bool {
    k.into_iter().find(|&c| c != 0).is_some_and(|c| c > 0)
}

/// Gaussian modes with `|k| <= RANDOM_SHELL` and amplitude `|k|^-2`.
fn random_solenoidal(grid: GridSpec, seed: u64) -> Result<SpectralVectorField> {
    let n = grid.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes: [Vec<_>; 3] = std::array::from_fn(|_| vec![Default::default(); grid.len()]);
    let scale = grid.len() as f64;
    // fixed traversal order keeps the draw sequence independent of storage
    for idx in 0..grid.len() {
        let k = grid.wavevector(idx);
        if k.iter().any(|&c| c.unsigned_abs() as usize == n / 2) || !upper_half(k) {
            continue;
        }
        let kk = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
        if kk > RANDOM_SHELL {
            continue;
        }
        let amp = scale / (kk * kk);
        let conj = grid.conjugate_index(idx);
        for m in modes.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let z = Complex64::new(re * amp, im * amp);
            m[idx] = z;
            m[conj] = z.conj();
        }
    }
    Ok(SpectralVectorField::new(grid, modes)?)
}

/// Two counter-rotating Gaussian tubes along `z`, displaced by a small
/// `sin z` wobble so the flow is three-dimensional.
fn vortex_pair(grid: GridSpec) -> Result<SpectralVectorField> {
    let k0 = grid.base_wavenumber();
    let wrap = |d: f64| d - 2.0 * PI * (d / (2.0 * PI)).round();
    let w = VectorField::from_fn(grid, |x, y, z| {
        let (x, y, z) = (k0 * x, k0 * y, k0 * z);
        let shift = PAIR_WOBBLE * z.sin();
        let tube = |cx: f64| {
            let dx = wrap(x - cx - shift);
            let dy = wrap(y - PI);
            (-(dx * dx + dy * dy) / (2.0 * PAIR_CORE * PAIR_CORE)).exp()
        };
        [0.0, 0.0, tube(PI - PAIR_OFFSET) - tube(PI + PAIR_OFFSET)]
    })?;
    Ok(forward_transform(&w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use vortbound::diagnostics::lp_norm;
    use vortbound::spectral::inverse_transform;

    fn config(s: ScenarioName, n: usize) -> ScenarioConfig {
        ScenarioConfig {
            n,
            ..ScenarioConfig::new(s)
        }
    }

    #[test]
    fn every_scenario_is_solenoidal_and_mean_free() {
        for s in ScenarioName::ALL {
            let st = init_scenario(&config(s, 16)).unwrap();
            assert!(st.omega.divergence_defect() <= 1e-10, "{s}");
            assert!(st.omega.mean_mode() <= 1e-12 * st.omega.mode_norm(), "{s}");
            assert!(st.omega.l2_norm() > 0.0, "{s}");
            assert_eq!(st.t, 0.0);
        }
    }

    #[test]
    fn beltrami_norm() {
        let st = init_scenario(&config(ScenarioName::BeltramiAbc, 16)).unwrap();
        let expected = 3f64.sqrt() * (2.0 * PI).powf(1.5);
        assert!((st.omega.l2_norm() - expected).abs() < 1e-12 * expected);
        let mag = inverse_transform(&st.omega).unwrap().magnitude();
        assert!((lp_norm(&mag, 2.0).unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn taylor_green_matches_analytic_curl() {
        let c = config(ScenarioName::TaylorGreen, 16);
        let st = init_scenario(&c).unwrap();
        let w = VectorField::from_fn(c.grid().unwrap(), |x, y, z| {
            [
                -x.cos() * y.sin() * z.sin(),
                -x.sin() * y.cos() * z.sin(),
                2.0 * x.sin() * y.sin() * z.cos(),
            ]
        })
        .unwrap();
        let exact = forward_transform(&w).unwrap();
        let err = st.omega.add_scaled(-1.0, &exact).unwrap().mode_norm();
        assert!(err < 1e-12 * exact.mode_norm());
    }

    #[test]
    fn random_scenario_is_reproducible() {
        let mut c = config(ScenarioName::RandomSolenoidal, 16);
        c.seed = Some(42);
        c.amplitude = 2.0;
        let a = init_scenario(&c).unwrap();
        let b = init_scenario(&c).unwrap();
        assert_eq!(a, b);
        let rms = a.omega.l2_norm() / c.grid().unwrap().volume().sqrt();
        assert!((rms - 2.0).abs() < 1e-12);
        c.seed = Some(43);
        assert_ne!(init_scenario(&c).unwrap(), a);
    }

    #[test]
    fn random_scenario_stays_in_the_shell() {
        let mut c = config(ScenarioName::RandomSolenoidal, 16);
        c.seed = Some(1);
        let st = init_scenario(&c).unwrap();
        let g = c.grid().unwrap();
        for (idx, z) in st.omega.component(0).iter().enumerate() {
            let k = g.wavevector(idx);
            let kk = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
            if kk > RANDOM_SHELL {
                assert_eq!(z.norm(), 0.0);
            }
        }
        assert!(st.omega.hermitian_defect() < 1e-12);
    }
}
