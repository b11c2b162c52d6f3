//! Explicit a priori vorticity estimates evaluated in log space, and their
//! verification against measured norm series.

pub mod constants;
mod formulas;
mod schedule;
mod verify;

pub use formulas::{
    bound_enstrophy_time_integral, bound_grad_3eps, bound_grad_l2, bound_l2eps_norm,
    bound_lp_sup_growth, bound_second_grad_integral, bound_weighted_grad_integral, n_threshold,
    n_threshold_detail, triple_log_envelope, BoundInputs, NThreshold, DEFAULT_ALPHA, DEFAULT_EPS,
};
pub use schedule::{continuation_schedule, ContinuationSchedule, MAX_SCHEDULE_INTERVALS};
pub use verify::{
    bound_inputs, verify_trajectory, verify_with, BoundKind, BoundReport, ReportDocument,
    ReportRecord, VerifyOptions, REPORT_VERSION,
};
