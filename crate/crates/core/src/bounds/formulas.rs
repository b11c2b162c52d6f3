//! Bound formulas, transcribed term for term.
//!
//! All arithmetic is in [`LogScalar`]; the nested exponentials overflow
//! doubles for any realistic viscosity.

use serde::{Deserialize, Serialize};

use super::constants::*;
use crate::diagnostics::NConvention;
use crate::error::{Error, Result};
use crate::logscalar::LogScalar;

pub const DEFAULT_EPS: f64 = 0.01;
pub const DEFAULT_ALPHA: f64 = 0.747;

/// Everything the bound formulas read, measured on `[t1, t2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub nu: f64,
    pub eps: f64,
    pub t1: f64,
    pub t2: f64,
    /// `N`, see [`NConvention`].
    #[serde(rename = "N")]
    pub n: f64,
    /// `C(t1, t2) = int_{t1}^{t2} |w|_2^2 dt`
    #[serde(rename = "C")]
    pub c: f64,
    /// `|w|_{2 + 2eps/3}(t1)`
    pub l2eps_t1: f64,
    /// `|grad w|_2(t1)`
    pub grad_l2_t1: f64,
    /// `|grad w|_{3+eps}^{3+eps}(t1)`
    pub grad_3eps_t1_pow: f64,
    /// `|w|_inf(t1)`
    pub sup_t1: f64,
    pub alpha: f64,
    pub n_convention: NConvention,
}

impl BoundInputs {
    /// Inputs with every norm zero on `[t1, t1]`.
    pub fn zeroed(nu: f64) -> Self {
        Self {
            nu,
            eps: DEFAULT_EPS,
            t1: 0.0,
            t2: 0.0,
            n: 0.0,
            c: 0.0,
            l2eps_t1: 0.0,
            grad_l2_t1: 0.0,
            grad_3eps_t1_pow: 0.0,
            sup_t1: 0.0,
            alpha: DEFAULT_ALPHA,
            n_convention: NConvention::SquaredNorm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (1/2, 1), got {}", self.alpha));
        }
        if !(self.t1.is_finite() && self.t2.is_finite()) || self.t2 < self.t1 {
            return Err(Error::Interval(format!("[{}, {}]", self.t1, self.t2)));
        }
        let norms = [
            self.n,
            self.c,
            self.l2eps_t1,
            self.grad_l2_t1,
            self.grad_3eps_t1_pow,
            self.sup_t1,
        ];
        if norms.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad(format!("norm inputs must be finite and nonnegative: {norms:?}"));
        }
        Ok(())
    }

    fn span(&self) -> f64 {
        self.t2 - self.t1
    }
}

fn ls(x: f64) -> LogScalar {
    LogScalar::new(x)
}

/// `c / nu^p` in log space.
fn over_nu(inp: &BoundInputs, c: f64, p: f64) -> LogScalar {
    ls(c) * ls(inp.nu).pow(-p)
}

/// `e^{4.22 N^{1/2} (t2 - t1)}`
fn growth_exponential(inp: &BoundInputs) -> LogScalar {
    (ls(GROWTH_RATE) * ls(inp.n).pow(0.5) * ls(inp.span())).exp()
}

/// `3.99e26/nu^a N^b C + 3.562e5/nu N^{1/2} C + 1.7e5 N/nu + 0.371e5 (t2 - t1)`
fn growth_terms(inp: &BoundInputs, nu_power: f64, n_power: f64) -> LogScalar {
    let c = ls(inp.c);
    over_nu(inp, BRACKET_LEAD, nu_power) * ls(inp.n).pow(n_power) * c
        + over_nu(inp, BRACKET_SQRT_N, 1.0) * ls(inp.n).pow(0.5) * c
        + over_nu(inp, BRACKET_N, 1.0) * ls(inp.n)
        + ls(BRACKET_TIME) * ls(inp.span())
}

/// `|w|_{2+2eps/3}^{(1-alpha)(2+2eps/3)}(t1)`
fn l2eps_term(inp: &BoundInputs) -> LogScalar {
    let p = 2.0 + 2.0 * inp.eps / 3.0;
    ls(inp.l2eps_t1).pow((1.0 - inp.alpha) * p)
}

/// The seven-term bracket `1 + growth + 1.066 N^{1/2} (t2 - t1) + last`.
fn seven_term(inp: &BoundInputs, nu_power: f64, n_power: f64, last: LogScalar) -> LogScalar {
    LogScalar::ONE
        + growth_terms(inp, nu_power, n_power)
        + ls(BRACKET_SQRT_N_TIME) * ls(inp.n).pow(0.5) * ls(inp.span())
        + last
}

fn checked(inp: &BoundInputs) -> Result<()> {
    inp.validate()
}

/// Bound on `int_{t1}^{t2} int |grad w|^2`.
pub fn bound_enstrophy_time_integral(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let (n, c) = (ls(inp.n), ls(inp.c));
    Ok(
        over_nu(inp, ENSTROPHY_LEAD, 4.0 + 2.0 * inp.eps) * n.pow(2.0 + inp.eps) * c
            + over_nu(inp, ENSTROPHY_MID, 1.0) * n.pow(0.5) * c
            + over_nu(inp, ENSTROPHY_TAIL, 1.0) * n,
    )
}

/// Bound on `int |w|^{2+2eps/3}(t2)`.
pub fn bound_l2eps_norm(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let bracket = growth_terms(inp, 4.0 + 2.0 * inp.eps, 2.0 + inp.eps)
        + LogScalar::ONE
        + l2eps_term(inp);
    Ok(growth_exponential(inp) * bracket.pow(1.0 / (1.0 - inp.alpha)))
}

/// Bound on `int_{t1}^{t2} D_eps dt`, the two weighted dissipation integrals.
pub fn bound_weighted_grad_integral(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let bracket = seven_term(inp, 4.0 + 2.0 * inp.eps, 2.0 + inp.eps, l2eps_term(inp));
    Ok(over_nu(inp, WEIGHTED_PREFACTOR, 1.0)
        * growth_exponential(inp)
        * bracket.pow(BRACKET_POWER))
}

/// `C_tower / nu^2 * e^{4.22 N^{1/2} (t2-t1)} * bracket^5`
fn tower(inp: &BoundInputs, lead: f64, bracket: LogScalar) -> LogScalar {
    over_nu(inp, lead, 2.0) * growth_exponential(inp) * bracket.pow(BRACKET_POWER)
}

/// Bound on `int |grad w|^2(t2)`.
pub fn bound_grad_l2(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let bracket = seven_term(inp, PRINTED_NU_POWER, PRINTED_N_POWER, l2eps_term(inp));
    let exponent = over_nu(inp, GRAD_L2_TIME, 1.0) * ls(inp.span())
        + over_nu(inp, GRAD_L2_C, 1.0) * ls(inp.c)
        + tower(inp, GRAD_L2_TOWER, bracket);
    Ok(ls(inp.grad_l2_t1).pow(2.0) * exponent.exp())
}

/// Bound on `int_{t1}^{t2} int |grad grad w|^2`.
pub fn bound_second_grad_integral(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let bracket = seven_term(inp, PRINTED_NU_POWER, 2.0 + inp.eps, l2eps_term(inp));
    let exponent = over_nu(inp, SECOND_GRAD_TIME, 1.0) * ls(inp.span())
        + over_nu(inp, SECOND_GRAD_C, 1.0) * ls(inp.c)
        + tower(inp, SECOND_GRAD_TOWER, bracket);
    Ok(over_nu(inp, SECOND_GRAD_PREFACTOR, 1.0) * ls(inp.grad_l2_t1).pow(2.0) * exponent.exp())
}

/// `3.78e4 (1 + |grad w|_2^2(t1))^2 (N + 1 + 1/nu) (t2 - t1 + 1.945/nu)`
fn grad_3eps_mid(inp: &BoundInputs) -> LogScalar {
    ls(GRAD_3EPS_MID)
        * (LogScalar::ONE + ls(inp.grad_l2_t1).pow(2.0)).pow(2.0)
        * (ls(inp.n) + 1.0 + over_nu(inp, 1.0, 1.0))
        * (ls(inp.span()) + over_nu(inp, SECOND_GRAD_PREFACTOR, 1.0))
}

/// `2.45e5 (t2 - t1)/nu + 180 C/nu`
fn grad_3eps_inner_linear(inp: &BoundInputs) -> LogScalar {
    over_nu(inp, GRAD_3EPS_INNER_TIME, 1.0) * ls(inp.span())
        + over_nu(inp, GRAD_3EPS_INNER_C, 1.0) * ls(inp.c)
}

/// `2.48e3/nu C + 3.58e4 (N + 1)(t2 - t1)`
fn grad_3eps_outer_linear(inp: &BoundInputs) -> LogScalar {
    over_nu(inp, GRAD_3EPS_C, 1.0) * ls(inp.c)
        + ls(GRAD_3EPS_TIME) * (ls(inp.n) + 1.0) * ls(inp.span())
}

/// Bound on `int |grad w|^{3+eps}(t2)`.
pub fn bound_grad_3eps(inp: &BoundInputs) -> Result<LogScalar> {
    checked(inp)?;
    let last = ls(inp.l2eps_t1).pow(PRINTED_INNER_NORM_POWER);
    let bracket = seven_term(inp, PRINTED_NU_POWER, PRINTED_N_POWER, last);
    let inner = grad_3eps_inner_linear(inp) + tower(inp, GRAD_3EPS_TOWER, bracket);
    let outer = grad_3eps_outer_linear(inp) + grad_3eps_mid(inp) * inner.exp();
    Ok((ls(inp.grad_3eps_t1_pow) + 1.0) * outer.exp())
}

/// Bound on `|w|_n(t2)` or `|w|_inf(t2)` given its value at `t1` and the
/// maximum of `|grad w|_{3+eps}^{3+eps}` over the interval.
pub fn bound_lp_sup_growth(
    initial_norm: f64,
    inp: &BoundInputs,
    max_grad_3eps_pow: f64,
) -> Result<LogScalar> {
    checked(inp)?;
    if !(initial_norm.is_finite() && initial_norm >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial norm must be finite and nonnegative, got {initial_norm}"
        )));
    }
    if !(max_grad_3eps_pow.is_finite() && max_grad_3eps_pow >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "max |grad w|_(3+eps)^(3+eps) must be finite and nonnegative, got {max_grad_3eps_pow}"
        )));
    }
    let n = ls(inp.n);
    let exponent =
        ls(LP_SUP_RATE) * (n.pow(2.0) + 1.0) * ls(inp.span()) * (ls(max_grad_3eps_pow) + 1.0);
    Ok(ls(initial_norm) * exponent.exp())
}

/// The `ln n` threshold with its nested exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct NThreshold {
    /// Right-hand side of the `ln n >= ...` condition.
    pub ln_n: LogScalar,
    /// Exponent arguments from the innermost outward, each as a LogScalar.
    pub exponent_chain: Vec<LogScalar>,
}

impl NThreshold {
    /// `ln(ln n)` when finite.
    pub fn ln_ln_n(&self) -> Option<f64> {
        let l = self.ln_n.ln();
        l.is_finite().then_some(l)
    }

    /// Neither `ln n` nor `ln ln n` fits in a double.
    pub fn is_astronomical(&self) -> bool {
        self.ln_n.is_overflow()
    }

    /// The threshold `n` itself when it fits in a double, else infinity.
    pub fn n(&self) -> f64 {
        let ln_n = self.ln_n.value();
        if ln_n.is_finite() {
            ln_n.exp()
        } else {
            f64::INFINITY
        }
    }
}

/// Full threshold evaluation, keeping the partially evaluated exponents.
///
/// The innermost exponent adds the fifth power of the bracket to the tower
/// term rather than multiplying it, matching the threshold display.
pub fn n_threshold_detail(inp: &BoundInputs) -> Result<NThreshold> {
    checked(inp)?;
    let last = ls(inp.grad_3eps_t1_pow).pow(PRINTED_INNER_NORM_POWER / (3.0 + inp.eps));
    let bracket = seven_term(inp, PRINTED_NU_POWER, PRINTED_N_POWER, last);
    let innermost = grad_3eps_inner_linear(inp)
        + over_nu(inp, GRAD_3EPS_TOWER, 2.0) * growth_exponential(inp)
        + bracket.pow(BRACKET_POWER);
    let middle = grad_3eps_outer_linear(inp) + grad_3eps_mid(inp) * innermost.exp();
    let n = ls(inp.n);
    let outer = ls(THRESHOLD_RATE)
        * (n.pow(2.0) + 1.0)
        * (ls(inp.span()) + 1.0)
        * (ls(inp.grad_3eps_t1_pow) + 1.0)
        * middle.exp();
    let sup = ls(inp.sup_t1);
    let ln_sup_abs = if inp.sup_t1 == 0.0 {
        LogScalar::OVERFLOW
    } else {
        ls(inp.sup_t1.ln().abs())
    };
    let ln_n = ls(THRESHOLD_SQRT_N) * n.pow(0.5)
        + ls(THRESHOLD_SUP) * (sup + 1.0) * (ln_sup_abs + 1.0) * outer.exp();
    Ok(NThreshold {
        ln_n,
        exponent_chain: vec![innermost, middle, outer],
    })
}

/// Right-hand side of the `ln n` condition.
pub fn n_threshold(inp: &BoundInputs) -> Result<LogScalar> {
    Ok(n_threshold_detail(inp)?.ln_n)
}

/// `e^{(1/n) e^{e^{t - t1}}} max(base, e^e)`; `n = inf` gives the limit.
pub fn triple_log_envelope(n: f64, t: f64, t1: f64, base: f64) -> Result<LogScalar> {
    if n.is_nan() || n < 1.0 {
        return Err(Error::InvalidArgument(format!("n must be >= 1, got {n}")));
    }
    if !(t.is_finite() && t1.is_finite()) || t < t1 {
        return Err(Error::Interval(format!("t = {t} precedes t1 = {t1}")));
    }
    if !(base.is_finite() && base >= 0.0) {
        return Err(Error::InvalidArgument(format!("base must be nonnegative, got {base}")));
    }
    let double_exp = LogScalar::from_ln((t - t1).exp());
    let exponent = double_exp * ls(1.0 / n);
    let floor = LogScalar::from_ln(std::f64::consts::E);
    Ok(exponent.exp() * ls(base).max(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn enstrophy_examples() {
        let mut inp = BoundInputs::zeroed(1.0);
        assert!(bound_enstrophy_time_integral(&inp).unwrap().is_zero());
        inp.n = 1.0;
        assert!(rel(bound_enstrophy_time_integral(&inp).unwrap().value(), 4.57) < 1e-14);
        inp.c = 1.0;
        let expected = (1.075e22_f64 + 9.6 + 4.57).ln();
        assert!(rel(bound_enstrophy_time_integral(&inp).unwrap().ln(), expected) < 1e-12);
    }

    #[test]
    fn l2eps_examples() {
        let mut inp = BoundInputs::zeroed(1.0);
        assert_eq!(bound_l2eps_norm(&inp).unwrap().ln(), 0.0);
        inp.l2eps_t1 = 1.0;
        let b = bound_l2eps_norm(&inp).unwrap();
        assert!(rel(b.ln(), 2f64.ln() / 0.253) < 1e-12);
        assert!((b.value() - 15.49).abs() < 0.01);
    }

    #[test]
    fn weighted_examples() {
        let inp = BoundInputs::zeroed(1.0);
        assert!(rel(bound_weighted_grad_integral(&inp).unwrap().value(), 1.97) < 1e-14);
        let inp = BoundInputs::zeroed(2.0);
        assert!(rel(bound_weighted_grad_integral(&inp).unwrap().value(), 0.985) < 1e-14);
    }

    #[test]
    fn grad_l2_examples() {
        let mut inp = BoundInputs::zeroed(1.0);
        assert!(bound_grad_l2(&inp).unwrap().is_zero());
        inp.grad_l2_t1 = 1.0;
        let b = bound_grad_l2(&inp).unwrap();
        assert!(!b.is_overflow());
        assert!(rel(b.ln(), 2.432e7) < 1e-12);
        assert!(b.exp().is_overflow());
    }

    #[test]
    fn second_grad_examples() {
        let mut inp = BoundInputs::zeroed(1.0);
        assert!(bound_second_grad_integral(&inp).unwrap().is_zero());
        inp.grad_l2_t1 = 1.0;
        let b1 = bound_second_grad_integral(&inp).unwrap();
        assert!(rel(b1.ln(), 1.945f64.ln() + 4.864e7) < 1e-12);
        inp.nu = 2.0;
        let b2 = bound_second_grad_integral(&inp).unwrap();
        assert!(rel(b2.ln(), (1.945f64 / 2.0).ln() + 4.864e7 / 4.0) < 1e-12);
    }

    #[test]
    fn grad_3eps_overflows_at_unit_viscosity() {
        let inp = BoundInputs::zeroed(1.0);
        let b = bound_grad_3eps(&inp).unwrap();
        assert!(b.is_overflow());
        assert!(b >= LogScalar::ONE);
    }

    #[test]
    fn lp_sup_examples() {
        let mut inp = BoundInputs::zeroed(1.0);
        assert_eq!(bound_lp_sup_growth(2.5, &inp, 7.0).unwrap().value(), 2.5);
        assert!(bound_lp_sup_growth(0.0, &inp, 7.0).unwrap().is_zero());
        inp.n = 1.0;
        inp.t2 = 1.0;
        let b = bound_lp_sup_growth(1.0, &inp, 0.0).unwrap();
        assert!(rel(b.ln(), 2.2e5) < 1e-12);
    }

    #[test]
    fn threshold_at_unit_sup_is_astronomical() {
        let mut inp = BoundInputs::zeroed(1.0);
        inp.sup_t1 = 1.0;
        let th = n_threshold_detail(&inp).unwrap();
        assert!(th.is_astronomical());
        assert_eq!(th.ln_ln_n(), None);
        // innermost exponent is finite: 7.294e7 + 1
        assert!(rel(th.exponent_chain[0].value(), 7.294e7 + 1.0) < 1e-12);
        assert!(rel(th.exponent_chain[1].ln(), 7.294e7 + 1.0) < 1e-6);
        assert!(th.exponent_chain[2].is_overflow());
        assert_eq!(th.n(), f64::INFINITY);
    }

    #[test]
    fn envelope_examples() {
        let e = std::f64::consts::E;
        let v = triple_log_envelope(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(rel(v.ln(), 2.0 * e) < 1e-14);
        assert!((v.value() - 229.65).abs() < 0.01);
        let v = triple_log_envelope(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(rel(v.ln(), e.powf(e) + e) < 1e-14);
        assert!((v.ln() - 17.87).abs() < 0.01);
        let v = triple_log_envelope(f64::INFINITY, 3.0, 0.0, 20.0).unwrap();
        assert!(rel(v.value(), 20.0) < 1e-14);
        assert!(triple_log_envelope(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(triple_log_envelope(0.5, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut inp = BoundInputs::zeroed(1.0);
        inp.nu = 0.0;
        assert!(bound_grad_l2(&inp).is_err());
        let mut inp = BoundInputs::zeroed(1.0);
        inp.t2 = -1.0;
        assert!(bound_grad_l2(&inp).is_err());
        let mut inp = BoundInputs::zeroed(1.0);
        inp.alpha = 0.4;
        assert!(bound_l2eps_norm(&inp).is_err());
    }
}
