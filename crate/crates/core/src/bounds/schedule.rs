use serde::{Deserialize, Serialize};

use super::constants::ANCHOR_SCHEDULE;
use crate::error::{Error, Result};

/// Refuse schedules with more intervals than this.
pub const MAX_SCHEDULE_INTERVALS: usize = 10_000_000;

/// Local-existence steps tiling `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationSchedule {
    pub horizon: f64,
    pub nu: f64,
    pub c_loc: f64,
    pub sup0: f64,
    pub sup_delta: f64,
    pub anchor: String,
    pub first_step: f64,
    pub subsequent_step: f64,
    /// `[tau_k, tau_{k+1}]`, contiguous; the last one may be truncated at `T`.
    pub intervals: Vec<[f64; 2]>,
    /// Formula step length for each interval (before truncation).
    pub steps: Vec<f64>,
}

/// First step `nu / (2 C sup0^2)`, then uniform steps
/// `nu / (2 C max(sup_delta^2, e^{2e}))` until `T` is covered.
///
/// `sup_delta` defaults to `sup0` when absent.
pub fn continuation_schedule(
    horizon: f64,
    nu: f64,
    c_loc: f64,
    sup0: f64,
    sup_delta: Option<f64>,
) -> Result<ContinuationSchedule> {
    let sup_delta = sup_delta.unwrap_or(sup0);
    for (name, v) in [
        ("T", horizon),
        ("nu", nu),
        ("C_loc", c_loc),
        ("sup0", sup0),
        ("sup_delta", sup_delta),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let first_step = nu / (2.0 * c_loc * sup0 * sup0);
    let floor = (2.0 * std::f64::consts::E).exp();
    let subsequent_step = nu / (2.0 * c_loc * (sup_delta * sup_delta).max(floor));

    let mut intervals = vec![[0.0, first_step.min(horizon)]];
    let mut steps = vec![first_step];
    if first_step < horizon {
        let remaining = horizon - first_step;
        let count = (remaining / subsequent_step - 1e-9).ceil().max(1.0);
        if count > MAX_SCHEDULE_INTERVALS as f64 {
            return Err(Error::InvalidArgument(format!(
                "schedule would need {count:.3e} intervals"
            )));
        }
        let count = count as usize;
        for k in 0..count {
            let start = first_step + k as f64 * subsequent_step;
            let end = if k + 1 == count {
                horizon
            } else {
                first_step + (k + 1) as f64 * subsequent_step
            };
            intervals.push([start, end]);
            steps.push(subsequent_step);
        }
    }
    Ok(ContinuationSchedule {
        horizon,
        nu,
        c_loc,
        sup0,
        sup_delta,
        anchor: ANCHOR_SCHEDULE.to_string(),
        first_step,
        subsequent_step,
        intervals,
        steps,
    })
}
