//! Norms and functionals of the vorticity consumed by the bound engine, plus
//! the enstrophy balance and weighted dissipation identities.
//!
//! All integrals are Riemann sums over the grid with weight `(L/n)^3`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ScalarField, SpectralVectorField};
use crate::grid::GridSpec;
use crate::solver::{FlowState, SolverConfig, Trajectory};
use crate::spectral::{self, biot_savart_unchecked, dealias_slice, forward_many, inverse_many};

/// Floor on the dissipation term in the balance residual denominator.
pub const BALANCE_FLOOR: f64 = 1e-30;

/// One time-stamped set of norms. Field order matches the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    /// `|w|_2`
    pub l2: f64,
    /// `|w|_{2 + 2 eps / 3}`
    pub l2eps: f64,
    pub l4: f64,
    /// `|w|_inf`, the grid maximum.
    pub sup: f64,
    /// `|grad w|_2`
    pub grad_l2: f64,
    /// `|grad w|_{3 + eps}`
    pub grad_3eps: f64,
    /// `|grad grad w|_2`
    pub grad2_l2: f64,
    /// `int w . (w . grad) u`
    pub stretch: f64,
    /// Weighted dissipation `D_eps`.
    pub wdiss: f64,
}

impl NormSample {
    pub const COLUMNS: [&'static str; 10] = [
        "t", "l2", "l2eps", "l4", "sup", "grad_l2", "grad_3eps", "grad2_l2", "stretch", "wdiss",
    ];

    pub fn zero(t: f64) -> Self {
        Self::from_row([t, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn to_row(&self) -> [f64; 10] {
        [
            self.t,
            self.l2,
            self.l2eps,
            self.l4,
            self.sup,
            self.grad_l2,
            self.grad_3eps,
            self.grad2_l2,
            self.stretch,
            self.wdiss,
        ]
    }

    pub fn from_row(r: [f64; 10]) -> Self {
        Self {
            t: r[0],
            l2: r[1],
            l2eps: r[2],
            l4: r[3],
            sup: r[4],
            grad_l2: r[5],
            grad_3eps: r[6],
            grad2_l2: r[7],
            stretch: r[8],
            wdiss: r[9],
        }
    }

    fn validate(&self) -> Result<()> {
        let row = self.to_row();
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("norm sample"));
        }
        let nonneg = [
            self.l2,
            self.l2eps,
            self.l4,
            self.sup,
            self.grad_l2,
            self.grad_3eps,
            self.grad2_l2,
            self.wdiss,
        ];
        if nonneg.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "negative norm in sample at t = {}",
                self.t
            )));
        }
        Ok(())
    }
}

/// Which quantity plays the role of `N` in the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NConvention {
    /// `N = max_t int |w|^2`
    #[default]
    SquaredNorm,
    /// `N = max_t |w|_2`
    Norm,
}

impl NConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            NConvention::SquaredNorm => "squared_norm",
            NConvention::Norm => "norm",
        }
    }
}

/// Norm samples at strictly increasing times.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    samples: Vec<NormSample>,
}

impl NormSeries {
    pub fn new(samples: Vec<NormSample>) -> Result<Self> {
        let mut s = Self::default();
        for sample in samples {
            s.push(sample)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, sample: NormSample) -> Result<()> {
        sample.validate()?;
        if let Some(last) = self.samples.last() {
            if sample.t <= last.t {
                return Err(Error::InvalidArgument(format!(
                    "sample times must increase strictly ({} after {})",
                    sample.t, last.t
                )));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn samples(&self) -> &[NormSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_range(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.t, self.samples.last()?.t))
    }

    /// Checks `t1 <= t2` and that both lie within the recorded range.
    pub fn check_interval(&self, t1: f64, t2: f64) -> Result<()> {
        let (lo, hi) = self
            .t_range()
            .ok_or_else(|| Error::Interval("empty norm series".into()))?;
        if !(t1.is_finite() && t2.is_finite()) || t2 < t1 {
            return Err(Error::Interval(format!("[{t1}, {t2}] is reversed or not finite")));
        }
        let tol = 1e-9 * hi.abs().max(1.0);
        if t1 < lo - tol || t2 > hi + tol {
            return Err(Error::Interval(format!(
                "[{t1}, {t2}] is outside the recorded range [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Linear interpolation of `f(sample)` at time `t` (clamped to the range).
    pub fn value_at(&self, t: f64, f: impl Fn(&NormSample) -> f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].t {
            return f(&s[0]);
        }
        if t >= s[s.len() - 1].t {
            return f(&s[s.len() - 1]);
        }
        let k = s.partition_point(|x| x.t <= t);
        let (a, b) = (&s[k - 1], &s[k]);
        let w = (t - a.t) / (b.t - a.t);
        (1.0 - w) * f(a) + w * f(b)
    }

    /// Knots of the piecewise-linear interpolant restricted to `[t1, t2]`.
    fn knots(&self, t1: f64, t2: f64, f: &impl Fn(&NormSample) -> f64) -> Vec<(f64, f64)> {
        let mut pts = vec![(t1, self.value_at(t1, f))];
        pts.extend(
            self.samples
                .iter()
                .filter(|s| s.t > t1 && s.t < t2)
                .map(|s| (s.t, f(s))),
        );
        if t2 > t1 {
            pts.push((t2, self.value_at(t2, f)));
        }
        pts
    }

    /// Trapezoidal integral of `f(sample)` over `[t1, t2]`.
    pub fn integrate(&self, t1: f64, t2: f64, f: impl Fn(&NormSample) -> f64) -> Result<f64> {
        self.check_interval(t1, t2)?;
        let pts = self.knots(t1, t2, &f);
        Ok(pts
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum())
    }

    /// Maximum of `f(sample)` over `[t1, t2]` on the interpolant.
    pub fn max_over(&self, t1: f64, t2: f64, f: impl Fn(&NormSample) -> f64) -> Result<f64> {
        self.check_interval(t1, t2)?;
        Ok(self
            .knots(t1, t2, &f)
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// `N` over `[t1, t2]` under the given convention.
    pub fn n_value(&self, t1: f64, t2: f64, convention: NConvention) -> Result<f64> {
        match convention {
            NConvention::SquaredNorm => self.max_over(t1, t2, |s| s.l2 * s.l2),
            NConvention::Norm => self.max_over(t1, t2, |s| s.l2),
        }
    }

    /// Running `C(t_0, t_k) = int_{t_0}^{t_k} |w|_2^2` at every sample.
    pub fn running_c(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.samples.len());
        for (k, s) in self.samples.iter().enumerate() {
            if k > 0 {
                let p = &self.samples[k - 1];
                acc += 0.5 * (s.t - p.t) * (p.l2 * p.l2 + s.l2 * s.l2);
            }
            out.push(acc);
        }
        out
    }
}

/// `C(t1, t2)`: trapezoidal integral of `|w|_2^2`.
pub fn time_integral(series: &NormSeries, t1: f64, t2: f64) -> Result<f64> {
    series.integrate(t1, t2, |s| s.l2 * s.l2)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be finite and >= 1, got {p}")));
    }
    Ok(())
}

fn lp_of_samples(grid: &GridSpec, samples: &[f64], p: f64) -> f64 {
    let m = samples.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|v| (v / m) * (v / m)).sum()
    } else {
        samples.iter().map(|v| (v.abs() / m).powf(p)).sum()
    };
    m * (sum * grid.cell_volume()).powf(1.0 / p)
}

/// `(sum |f|^p (L/n)^3)^(1/p)`.
pub fn lp_norm(field: &ScalarField, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(lp_of_samples(field.grid(), field.samples(), p))
}

pub fn sup_norm(field: &ScalarField) -> f64 {
    field.samples().iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn frobenius(grad: &[[Vec<f64>; 3]; 3], len: usize) -> Vec<f64> {
    (0..len)
        .map(|p| {
            grad.iter()
                .flatten()
                .map(|c| c[p] * c[p])
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// `|grad w|_p` with the pointwise Frobenius magnitude of all nine partials.
pub fn grad_lp_norm(omega: &SpectralVectorField, p: f64) -> Result<f64> {
    check_p(p)?;
    let grid = *omega.grid();
    let grad = spectral::gradient_physical(omega);
    Ok(lp_of_samples(&grid, &frobenius(&grad, grid.len()), p))
}

/// `|grad grad w|_2` over all 27 second partials, evaluated in mode space.
pub fn second_grad_l2(omega: &SpectralVectorField) -> f64 {
    let grid = *omega.grid();
    let k0 = grid.base_wavenumber();
    let mut sum = 0.0;
    for idx in 0..grid.len() {
        let k = grid.derivative_wavevector(idx);
        let k2 = k0 * k0 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let amp: f64 = omega.modes().iter().map(|m| m[idx].norm_sqr()).sum();
        sum += k2 * k2 * amp;
    }
    let n3 = grid.len() as f64;
    (sum * grid.volume()).sqrt() / n3
}

/// Physical samples shared by the functionals below.
struct PhysicalView {
    grid: GridSpec,
    omega: [Vec<f64>; 3],
    grad: [[Vec<f64>; 3]; 3],
}

impl PhysicalView {
    fn new(omega: &SpectralVectorField) -> Self {
        Self {
            grid: *omega.grid(),
            omega: spectral::to_physical(omega),
            grad: spectral::gradient_physical(omega),
        }
    }

    fn magnitude(&self) -> Vec<f64> {
        let w = &self.omega;
        (0..self.grid.len())
            .map(|p| (w[0][p] * w[0][p] + w[1][p] * w[1][p] + w[2][p] * w[2][p]).sqrt())
            .collect()
    }
}

/// `S = int w . (w . grad) u d^3x` with the product dealiased before the
/// quadrature. Since `w` is band-limited, the grid sum equals the mode-space
/// inner product, which is how it is evaluated.
pub fn stretching_functional(omega: &SpectralVectorField) -> f64 {
    stretching_with(omega, &spectral::to_physical(omega))
}

fn stretching_with(omega: &SpectralVectorField, w: &[Vec<f64>; 3]) -> f64 {
    let grid = *omega.grid();
    let u = biot_savart_unchecked(omega);
    let gu = spectral::gradient_physical(&u);
    let mut prod: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; grid.len()]);
    for (i, out) in prod.iter_mut().enumerate() {
        for j in 0..3 {
            for p in 0..grid.len() {
                out[p] += w[j][p] * gu[j][i][p];
            }
        }
    }
    let mut ph = spectral::from_physical(&grid, [&prod[0], &prod[1], &prod[2]]);
    for m in ph.modes_mut() {
        dealias_slice(&grid, m);
    }
    omega.inner(&ph)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Expanded weighted dissipation
/// `(2eps/3)/(1+eps/3)^2 int |grad |w|^(1+eps/3)|^2 + int |w|^(2eps/3) |grad w|^2`.
pub fn weighted_dissipation(omega: &SpectralVectorField, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let view = PhysicalView::new(omega);
    Ok(weighted_dissipation_with(&view, &view.magnitude(), eps))
}

fn weighted_dissipation_with(view: &PhysicalView, mag: &[f64], eps: f64) -> f64 {
    let grid = view.grid;
    let a = 2.0 * eps / 3.0;
    let powered: Vec<f64> = mag.iter().map(|m| m.powf(1.0 + eps / 3.0)).collect();
    let grad_pow = scalar_gradient(&grid, &powered);
    let first: f64 = (0..grid.len())
        .map(|p| grad_pow.iter().map(|g| g[p] * g[p]).sum::<f64>())
        .sum();
    let frob2 = |p: usize| view.grad.iter().flatten().map(|c| c[p] * c[p]).sum::<f64>();
    let second: f64 = (0..grid.len()).map(|p| mag[p].powf(a) * frob2(p)).sum();
    let coef = a / (1.0 + eps / 3.0).powi(2);
    (coef * first + second) * grid.cell_volume()
}

/// Spectral gradient of a real scalar sampled on the grid.
pub(crate) fn scalar_gradient(grid: &GridSpec, f: &[f64]) -> [Vec<f64>; 3] {
    let fhat = forward_many(grid, &[f]).pop().unwrap_or_default();
    let k0 = grid.base_wavenumber();
    let mut d: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
    for (idx, z) in fhat.iter().enumerate() {
        let k = grid.derivative_wavevector(idx);
        for c in 0..3 {
            d[c].push(Complex64::new(0.0, k0 * k[c] as f64) * z);
        }
    }
    let mut out = inverse_many(grid, &[&d[0], &d[1], &d[2]]).into_iter();
    std::array::from_fn(|_| out.next().unwrap_or_default())
}

/// All norms of one state.
pub fn sample_norms(state: &FlowState, eps: f64) -> Result<NormSample> {
    check_eps(eps)?;
    let view = PhysicalView::new(&state.omega);
    let grid = view.grid;
    let mag = view.magnitude();
    let gmag = frobenius(&view.grad, grid.len());
    let sample = NormSample {
        t: state.t,
        l2: lp_of_samples(&grid, &mag, 2.0),
        l2eps: lp_of_samples(&grid, &mag, 2.0 + 2.0 * eps / 3.0),
        l4: lp_of_samples(&grid, &mag, 4.0),
        sup: mag.iter().fold(0.0, |a: f64, v| a.max(*v)),
        grad_l2: lp_of_samples(&grid, &gmag, 2.0),
        grad_3eps: lp_of_samples(&grid, &gmag, 3.0 + eps),
        grad2_l2: second_grad_l2(&state.omega),
        stretch: stretching_with(&state.omega, &view.omega),
        wdiss: weighted_dissipation_with(&view, &mag, eps),
    };
    sample.validate()?;
    Ok(sample)
}

/// Samples every state of a trajectory.
pub fn sample_trajectory(trajectory: &Trajectory, eps: f64) -> Result<NormSeries> {
    let mut series = NormSeries::default();
    for state in &trajectory.states {
        series.push(sample_norms(state, eps)?)?;
    }
    Ok(series)
}

/// Second-order derivative estimate of `f` at every knot.
fn time_derivative(t: &[f64], f: &[f64]) -> Vec<f64> {
    let m = t.len();
    let mut d = vec![0.0; m];
    for k in 0..m {
        let (a, b, c) = if k == 0 {
            (0, 1, 2)
        } else if k == m - 1 {
            (m - 3, m - 2, m - 1)
        } else {
            (k - 1, k, k + 1)
        };
        // derivative at t[k] of the quadratic through (a, b, c)
        let x = t[k];
        let la = ((x - t[b]) + (x - t[c])) / ((t[a] - t[b]) * (t[a] - t[c]));
        let lb = ((x - t[a]) + (x - t[c])) / ((t[b] - t[a]) * (t[b] - t[c]));
        let lc = ((x - t[a]) + (x - t[b])) / ((t[c] - t[a]) * (t[c] - t[b]));
        d[k] = la * f[a] + lb * f[b] + lc * f[c];
    }
    d
}

/// Relative residual of `1/2 d_t |w|_2^2 + nu |grad w|_2^2 - S` at every
/// sample. Interior points use centered differences; the two endpoints use
/// one-sided stencils and are excluded by [`max_interior_residual`].
pub fn balance_residual_series(series: &NormSeries, nu: f64) -> Result<Vec<f64>> {
    let s = series.samples();
    if s.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "balance residual needs at least 3 samples, got {}",
            s.len()
        )));
    }
    let t: Vec<f64> = s.iter().map(|x| x.t).collect();
    let half_e: Vec<f64> = s.iter().map(|x| 0.5 * x.l2 * x.l2).collect();
    let d = time_derivative(&t, &half_e);
    Ok(s
        .iter()
        .zip(d)
        .map(|(x, dk)| {
            let diss = nu * x.grad_l2 * x.grad_l2;
            (dk + diss - x.stretch).abs() / diss.max(BALANCE_FLOOR)
        })
        .collect())
}

pub fn enstrophy_balance_residual(
    trajectory: &Trajectory,
    config: &SolverConfig,
) -> Result<Vec<f64>> {
    if trajectory.states.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "balance residual needs at least 3 samples, got {}",
            trajectory.states.len()
        )));
    }
    let mut series = NormSeries::default();
    for st in &trajectory.states {
        let grad = spectral::gradient_physical(&st.omega);
        let grid = *st.grid();
        let sample = NormSample {
            t: st.t,
            l2: st.omega.l2_norm(),
            grad_l2: lp_of_samples(&grid, &frobenius(&grad, grid.len()), 2.0),
            stretch: stretching_functional(&st.omega),
            ..NormSample::zero(st.t)
        };
        series.push(sample)?;
    }
    balance_residual_series(&series, config.nu)
}

/// Largest residual over interior samples.
pub fn max_interior_residual(residuals: &[f64]) -> f64 {
    if residuals.len() < 3 {
        return 0.0;
    }
    residuals[1..residuals.len() - 1]
        .iter()
        .fold(0.0, |a, &b| a.max(b))
}
