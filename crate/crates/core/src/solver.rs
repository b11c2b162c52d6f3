//! Time integration of the vorticity equation
//! `d_t w = nu Lap w - (u . grad) w + (w . grad) u`, with `u` recovered from
//! `w` by Biot-Savart inversion.

use std::fmt;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::GridSpec;
use crate::spectral::{self, biot_savart_unchecked, dealias_slice, inverse_many, project_in_place};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub record_stride: usize,
    pub dealias_enabled: bool,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::InvalidArgument(format!("nu must be positive, got {}", self.nu)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be finite and nonnegative, got {}",
                self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidArgument("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the configuration and grid, used for provenance.
    pub fn digest(&self, grid: &GridSpec) -> String {
        let text = format!(
            "nu={:e};dt={:e};t_end={:e};stride={};dealias={};n={};L={:e};frac={:e}",
            self.nu,
            self.dt,
            self.t_end,
            self.record_stride,
            self.dealias_enabled,
            grid.n(),
            grid.length(),
            grid.dealias_fraction()
        );
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub omega: SpectralVectorField,
}

impl FlowState {
    /// Checks the solenoidal and mean-free invariants.
    pub fn new(t: f64, omega: SpectralVectorField) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite("state time"));
        }
        if !omega.is_finite() {
            return Err(Error::NonFinite("vorticity"));
        }
        let defect = omega.divergence_defect();
        if defect > crate::SOLENOIDAL_TOL {
            return Err(Error::InvalidArgument(format!(
                "initial vorticity is not solenoidal (defect {defect:.3e})"
            )));
        }
        let scale = omega.mode_norm().max(f64::MIN_POSITIVE);
        if omega.mean_mode() > spectral::MEAN_MODE_TOL * scale {
            return Err(Error::NonzeroMean(omega.mean_mode() / scale));
        }
        Ok(Self { t, omega })
    }

    pub fn grid(&self) -> &GridSpec {
        self.omega.grid()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub scenario: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub provenance: Provenance,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&FlowState> {
        self.states.last()
    }
}

/// A simulation that stopped early; the states recorded so far are kept.
#[derive(Debug, Clone)]
pub struct SimulationFailure {
    pub partial: Trajectory,
    pub error: Error,
}

impl fmt::Display for SimulationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} states recorded before failure)",
            self.error,
            self.partial.states.len()
        )
    }
}

impl std::error::Error for SimulationFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// `-(u . grad) w + (w . grad) u`, formed on the grid, optionally dealiased,
/// then projected solenoidal with the mean removed.
pub(crate) fn nonlinear_term(
    omega: &SpectralVectorField,
    dealias: bool,
) -> std::result::Result<SpectralVectorField, ()> {
    let grid = *omega.grid();
    let u = biot_savart_unchecked(omega);
    let gw = spectral::gradient(omega);
    let gu = spectral::gradient(&u);
    let mut spectra: Vec<&[Complex64]> = Vec::with_capacity(24);
    for c in 0..3 {
        spectra.push(omega.component(c));
        spectra.push(u.component(c));
    }
    for j in 0..3 {
        for i in 0..3 {
            spectra.push(gw.component(j, i));
            spectra.push(gu.component(j, i));
        }
    }
    let phys = inverse_many(&grid, &spectra);
    let w = |c: usize| &phys[2 * c];
    let uu = |c: usize| &phys[2 * c + 1];
    // d_j w_i and d_j u_i
    let dw = |j: usize, i: usize| &phys[6 + 2 * (3 * j + i)];
    let du = |j: usize, i: usize| &phys[6 + 2 * (3 * j + i) + 1];

    let mut out: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; grid.len()]);
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..3 {
            let (wj, uj, dwji, duji) = (w(j), uu(j), dw(j, i), du(j, i));
            for p in 0..grid.len() {
                o[p] += wj[p] * duji[p] - uj[p] * dwji[p];
            }
        }
    }
    if out.iter().flatten().any(|v| !v.is_finite()) {
        return Err(());
    }
    let mut n = spectral::from_physical(&grid, [&out[0], &out[1], &out[2]]);
    if dealias {
        for m in n.modes_mut() {
            dealias_slice(&grid, m);
        }
    }
    project_in_place(&mut n);
    n.zero_mean();
    Ok(n)
}

/// `|k|^2` in physical units for every mode (true Nyquist wavenumber).
fn laplacian_symbol(grid: &GridSpec) -> Vec<f64> {
    let k0 = grid.base_wavenumber();
    (0..grid.len())
        .map(|idx| {
            let k = grid.wavevector(idx);
            k0 * k0 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
        })
        .collect()
}

/// Full right-hand side `nu Lap w + N(w)`, with dealiased nonlinear products.
pub fn vorticity_rhs(omega: &SpectralVectorField, nu: f64) -> Result<SpectralVectorField> {
    if !omega.is_finite() {
        return Err(Error::NonFinite("vorticity"));
    }
    let mut out = nonlinear_term(omega, true).map_err(|_| Error::NonFinite("nonlinear term"))?;
    let k2 = laplacian_symbol(omega.grid());
    for (o, w) in out.modes_mut().iter_mut().zip(omega.modes()) {
        for ((ov, wv), k2v) in o.iter_mut().zip(w).zip(&k2) {
            *ov -= wv * (nu * k2v);
        }
    }
    Ok(out)
}

fn scale_by(field: &SpectralVectorField, factors: &[f64]) -> SpectralVectorField {
    let mut out = field.clone();
    for m in out.modes_mut() {
        for (z, f) in m.iter_mut().zip(factors) {
            *z *= *f;
        }
    }
    out
}

/// `a + h * b`, both already on the same grid.
fn axpy(a: &SpectralVectorField, h: f64, b: &SpectralVectorField) -> SpectralVectorField {
    a.add_scaled(h, b).expect("stage fields share a grid")
}

/// One integrating-factor RK4 step of length `dt`.
fn advance(
    state: &FlowState,
    nu: f64,
    dt: f64,
    dealias: bool,
    k2: &[f64],
) -> Result<FlowState> {
    let blow_up = || Error::BlowUp {
        t: state.t + dt,
        last_finite_t: state.t,
    };
    let half: Vec<f64> = k2.iter().map(|k| (-nu * k * dt * 0.5).exp()).collect();
    let full: Vec<f64> = half.iter().map(|e| e * e).collect();
    let nl = |w: &SpectralVectorField| nonlinear_term(w, dealias).map_err(|_| blow_up());

    let w = &state.omega;
    let k1 = nl(w)?;
    let k2s = nl(&scale_by(&axpy(w, 0.5 * dt, &k1), &half))?;
    let w_half = scale_by(w, &half);
    let k3 = nl(&axpy(&w_half, 0.5 * dt, &k2s))?;
    let k4 = nl(&axpy(&scale_by(w, &full), dt, &scale_by(&k3, &half)))?;

    let mut next = scale_by(w, &full);
    let mids = axpy(&k2s, 1.0, &k3);
    next = axpy(&next, dt / 6.0, &scale_by(&k1, &full));
    next = axpy(&next, dt / 3.0, &scale_by(&mids, &half));
    next = axpy(&next, dt / 6.0, &k4);
    project_in_place(&mut next);
    next.zero_mean();
    if !next.is_finite() {
        return Err(blow_up());
    }
    Ok(FlowState {
        t: state.t + dt,
        omega: next,
    })
}

/// Advances `state` by `config.dt`.
pub fn step(state: &FlowState, config: &SolverConfig) -> Result<FlowState> {
    config.validate()?;
    let k2 = laplacian_symbol(state.grid());
    advance(state, config.nu, config.dt, config.dealias_enabled, &k2)
}

/// Largest `|u|` on the grid.
pub fn max_velocity(omega: &SpectralVectorField) -> f64 {
    let u = spectral::to_physical(&biot_savart_unchecked(omega));
    (0..omega.grid().len())
        .map(|p| (u[0][p] * u[0][p] + u[1][p] * u[1][p] + u[2][p] * u[2][p]).sqrt())
        .fold(0.0, f64::max)
}

/// Advective CFL number `dt * max|u| * n / L`.
pub fn cfl_number(state: &FlowState, config: &SolverConfig) -> f64 {
    let g = state.grid();
    config.dt * max_velocity(&state.omega) * g.n() as f64 / g.length()
}

pub const CFL_ADVISORY: f64 = 0.5;

/// Integrates from `initial.t` to `config.t_end`, recording every
/// `record_stride` steps plus the final state.
pub fn run_simulation(
    initial: &FlowState,
    config: &SolverConfig,
) -> std::result::Result<Trajectory, SimulationFailure> {
    let grid = *initial.grid();
    let mut trajectory = Trajectory {
        states: Vec::new(),
        provenance: Provenance {
            config_hash: config.digest(&grid),
            scenario: "custom".into(),
        },
    };
    let fail = |trajectory: Trajectory, error: Error| SimulationFailure {
        partial: trajectory,
        error,
    };
    if let Err(e) = config.validate() {
        return Err(fail(trajectory, e));
    }
    if let Err(e) = FlowState::new(initial.t, initial.omega.clone()) {
        return Err(fail(trajectory, e));
    }
    if config.t_end < initial.t {
        return Err(fail(
            trajectory,
            Error::Interval(format!(
                "t_end {} precedes the initial time {}",
                config.t_end, initial.t
            )),
        ));
    }

    let span = config.t_end - initial.t;
    let steps = if span <= 1e-12 * config.dt {
        0
    } else {
        (span / config.dt - 1e-9).ceil() as usize
    };
    let cfl = cfl_number(initial, config);
    if cfl > CFL_ADVISORY {
        log::warn!("advective CFL number {cfl:.3} exceeds {CFL_ADVISORY}");
    }

    let k2 = laplacian_symbol(&grid);
    let mut state = initial.clone();
    trajectory.states.push(state.clone());
    for k in 1..=steps {
        let target = if k == steps {
            config.t_end
        } else {
            initial.t + k as f64 * config.dt
        };
        let h = target - state.t;
        match advance(&state, config.nu, h, config.dealias_enabled, &k2) {
            Ok(mut next) => {
                next.t = target;
                state = next;
            }
            Err(e) => return Err(fail(trajectory, e)),
        }
        if k % config.record_stride == 0 || k == steps {
            trajectory.states.push(state.clone());
        }
    }
    Ok(trajectory)
}
