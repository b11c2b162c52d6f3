//! Pairs every bound with the measured quantity it controls.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::constants::*;
use super::formulas::*;
use crate::diagnostics::{time_integral, NConvention, NormSeries};
use crate::error::Result;
use crate::logscalar::LogScalar;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    EnstrophyTimeIntegral,
    L2epsNorm,
    WeightedGradIntegral,
    GradL2,
    SecondGradIntegral,
    Grad3eps,
    LpSupGrowth,
    TripleLogEnvelope,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::EnstrophyTimeIntegral,
        BoundKind::L2epsNorm,
        BoundKind::WeightedGradIntegral,
        BoundKind::GradL2,
        BoundKind::SecondGradIntegral,
        BoundKind::Grad3eps,
        BoundKind::LpSupGrowth,
        BoundKind::TripleLogEnvelope,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::EnstrophyTimeIntegral => "enstrophy_time_integral",
            BoundKind::L2epsNorm => "l2eps_norm",
            BoundKind::WeightedGradIntegral => "weighted_grad_integral",
            BoundKind::GradL2 => "grad_l2",
            BoundKind::SecondGradIntegral => "second_grad_integral",
            BoundKind::Grad3eps => "grad_3eps",
            BoundKind::LpSupGrowth => "lp_sup_growth",
            BoundKind::TripleLogEnvelope => "triple_log_envelope",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Short description of the measured quantity.
    pub fn measured(&self) -> &'static str {
        match self {
            BoundKind::EnstrophyTimeIntegral => "int_{t1}^{t2} |grad w|_2^2 dt",
            BoundKind::L2epsNorm => "|w|_{2+2eps/3}^{2+2eps/3}(t2)",
            BoundKind::WeightedGradIntegral => "int_{t1}^{t2} D_eps dt",
            BoundKind::GradL2 => "|grad w|_2^2(t2)",
            BoundKind::SecondGradIntegral => "int_{t1}^{t2} |grad grad w|_2^2 dt",
            BoundKind::Grad3eps => "|grad w|_{3+eps}^{3+eps}(t2)",
            BoundKind::LpSupGrowth => "|w|_inf(t2)",
            BoundKind::TripleLogEnvelope => "|w|_inf(t2)",
        }
    }

    pub fn anchor(&self) -> &'static str {
        match self {
            BoundKind::EnstrophyTimeIntegral => ANCHOR_ENSTROPHY_INTEGRAL,
            BoundKind::L2epsNorm => ANCHOR_L2EPS_NORM,
            BoundKind::WeightedGradIntegral => ANCHOR_WEIGHTED_GRAD,
            BoundKind::GradL2 => ANCHOR_GRAD_L2,
            BoundKind::SecondGradIntegral => ANCHOR_SECOND_GRAD,
            BoundKind::Grad3eps => ANCHOR_GRAD_3EPS,
            BoundKind::LpSupGrowth => ANCHOR_LP_SUP_GROWTH,
            BoundKind::TripleLogEnvelope => ANCHOR_ENVELOPE,
        }
    }

    /// Footnote printed with the report, if any.
    pub fn note(&self) -> Option<&'static str> {
        match self {
            BoundKind::Grad3eps => Some(
                "innermost bracket raises |w|_{2+2eps/3}(t1) to the printed 0.76153, \
                 not (2+2eps/3)(1-alpha) ~ 0.5077 as in the grad_l2 bound",
            ),
            BoundKind::LpSupGrowth => Some(
                "uses the n-free exponent of the final |w|_inf display",
            ),
            BoundKind::TripleLogEnvelope => Some(
                "n from the ln n threshold; when the threshold overflows the n -> inf \
                 limit max(|w|_inf(t1), e^e) is used; threshold innermost bracket is \
                 |grad w|_{3+eps}^{0.76153}(t1)",
            ),
            _ => None,
        }
    }
}

/// Settings shared by every bound evaluation of one verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub nu: f64,
    pub eps: f64,
    pub alpha: f64,
    pub n_convention: NConvention,
}

impl VerifyOptions {
    pub fn new(nu: f64, eps: f64) -> Self {
        Self {
            nu,
            eps,
            alpha: DEFAULT_ALPHA,
            n_convention: NConvention::SquaredNorm,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub bound: LogScalar,
    pub actual: LogScalar,
    /// `ln(bound) - ln(actual)`; `+inf` when the actual value is zero.
    pub log_margin: f64,
    pub satisfied: bool,
    pub inputs: BoundInputs,
}

impl BoundReport {
    pub fn new(kind: BoundKind, bound: LogScalar, actual: LogScalar, inputs: BoundInputs) -> Self {
        let log_margin = if actual.is_zero() {
            f64::INFINITY
        } else {
            bound.ln() - actual.ln()
        };
        let satisfied = bound.is_overflow() || log_margin >= 0.0;
        Self {
            kind,
            bound,
            actual,
            log_margin,
            satisfied,
            inputs,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn anchor(&self) -> &'static str {
        self.kind.anchor()
    }

    /// Hex SHA-256 of the inputs.
    pub fn inputs_digest(&self) -> String {
        let text = format!("{:?}", self.inputs);
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_record(&self) -> ReportRecord {
        let finite = |v: f64| v.is_finite().then_some(v);
        ReportRecord {
            name: self.name().to_string(),
            anchor: self.anchor().to_string(),
            ln_bound: finite(self.bound.ln()),
            overflow: self.bound.is_overflow(),
            ln_actual: finite(self.actual.ln()),
            log_margin: finite(self.log_margin),
            satisfied: self.satisfied,
            inputs: self.inputs,
        }
    }
}

/// Serialized form of one report. Non-finite logarithms are `null`; the
/// `overflow` flag distinguishes an infinite bound from a zero one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub name: String,
    pub anchor: String,
    pub ln_bound: Option<f64>,
    pub overflow: bool,
    pub ln_actual: Option<f64>,
    pub log_margin: Option<f64>,
    pub satisfied: bool,
    pub inputs: BoundInputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: u32,
    pub reports: Vec<ReportRecord>,
}

impl ReportDocument {
    pub fn from_reports(reports: &[BoundReport]) -> Self {
        Self {
            version: REPORT_VERSION,
            reports: reports.iter().map(BoundReport::to_record).collect(),
        }
    }
}

/// Assembles the bound inputs for `[t1, t2]` from a norm series.
pub fn bound_inputs(
    series: &NormSeries,
    opts: &VerifyOptions,
    t1: f64,
    t2: f64,
) -> Result<BoundInputs> {
    series.check_interval(t1, t2)?;
    let eps = opts.eps;
    let inputs = BoundInputs {
        nu: opts.nu,
        eps,
        t1,
        t2,
        n: series.n_value(t1, t2, opts.n_convention)?,
        c: time_integral(series, t1, t2)?,
        l2eps_t1: series.value_at(t1, |s| s.l2eps),
        grad_l2_t1: series.value_at(t1, |s| s.grad_l2),
        grad_3eps_t1_pow: series.value_at(t1, |s| s.grad_3eps).powf(3.0 + eps),
        sup_t1: series.value_at(t1, |s| s.sup),
        alpha: opts.alpha,
        n_convention: opts.n_convention,
    };
    inputs.validate()?;
    Ok(inputs)
}

/// Verification with default `alpha` and the squared-norm `N` convention.
pub fn verify_trajectory(
    series: &NormSeries,
    nu: f64,
    eps: f64,
    t1: f64,
    t2: f64,
) -> Result<Vec<BoundReport>> {
    verify_with(series, &VerifyOptions::new(nu, eps), t1, t2)
}

/// Evaluates all eight bounds on `[t1, t2]` against the measured series.
pub fn verify_with(
    series: &NormSeries,
    opts: &VerifyOptions,
    t1: f64,
    t2: f64,
) -> Result<Vec<BoundReport>> {
    let inputs = bound_inputs(series, opts, t1, t2)?;
    let eps = opts.eps;
    let at_t2 = |f: fn(&crate::diagnostics::NormSample) -> f64| series.value_at(t2, f);
    let ls = LogScalar::new;

    let enstrophy = series.integrate(t1, t2, |s| s.grad_l2 * s.grad_l2)?;
    let l2eps_pow = at_t2(|s| s.l2eps).powf(2.0 + 2.0 * eps / 3.0);
    let wdiss = series.integrate(t1, t2, |s| s.wdiss)?;
    let grad_l2_sq = at_t2(|s| s.grad_l2).powi(2);
    let grad2 = series.integrate(t1, t2, |s| s.grad2_l2 * s.grad2_l2)?;
    let grad_3eps_pow = at_t2(|s| s.grad_3eps).powf(3.0 + eps);
    let sup_t2 = at_t2(|s| s.sup);
    let max_grad_3eps_pow = series.max_over(t1, t2, |s| s.grad_3eps.powf(3.0 + eps))?;
    let threshold = n_threshold_detail(&inputs)?;

    let report = |kind, bound, actual: f64| BoundReport::new(kind, bound, ls(actual), inputs);
    Ok(vec![
        report(
            BoundKind::EnstrophyTimeIntegral,
            bound_enstrophy_time_integral(&inputs)?,
            enstrophy,
        ),
        report(BoundKind::L2epsNorm, bound_l2eps_norm(&inputs)?, l2eps_pow),
        report(
            BoundKind::WeightedGradIntegral,
            bound_weighted_grad_integral(&inputs)?,
            wdiss,
        ),
        report(BoundKind::GradL2, bound_grad_l2(&inputs)?, grad_l2_sq),
        report(
            BoundKind::SecondGradIntegral,
            bound_second_grad_integral(&inputs)?,
            grad2,
        ),
        report(BoundKind::Grad3eps, bound_grad_3eps(&inputs)?, grad_3eps_pow),
        report(
            BoundKind::LpSupGrowth,
            bound_lp_sup_growth(inputs.sup_t1, &inputs, max_grad_3eps_pow)?,
            sup_t2,
        ),
        report(
            BoundKind::TripleLogEnvelope,
            triple_log_envelope(threshold.n(), t2, t1, inputs.sup_t1)?,
            sup_t2,
        ),
    ])
}
