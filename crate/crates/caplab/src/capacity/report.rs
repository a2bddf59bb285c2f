//! One-call summary of every feedback capacity quantity the library
//! computes for a single channel and listsize exponent.

use crate::bounds::feedback_lower_bound;
use crate::capacity::{pi0, shannon_capacity};
use crate::channel::{ambiguous_output_upper_bound, cal_positive, czero_positive, q_star, Dmc};
use crate::gallager::maximize_e0;
use crate::SolveError;

/// Slope cap for the feedback lower bound when the caller does not pick
/// one. Large enough that noiseless channels get within 0.1% of their
/// full rate.
const XI_MAX_DEFAULT: f64 = 1e3;
const MAX_ITER: u64 = 1_000_000;

/// All capacity-like quantities of one channel at one exponent, in
/// nats.
///
/// Invariants, up to solver tolerance:
/// - `czero_feedback` is `neg_log_pi0` when `czero_positive`, else 0;
/// - `ceo_feedback` is either 0 or exactly `shannon_c`;
/// - `calf_upper = min(cutoff, ambiguous_upper)`, and when
///   `czero_positive` holds no output has full support, the ambiguous
///   bound is vacuous, and `calf_exact = calf_upper = cutoff`;
/// - `calf_lower <= calf_upper + 1e-9`.
#[derive(Debug, Clone)]
pub struct CapacityReport {
    pub rho: f64,
    /// Ordinary channel capacity C.
    pub shannon_c: f64,
    /// Value of the minimax covering game on the zero-pattern.
    pub pi0: f64,
    pub neg_log_pi0: f64,
    /// Whether two inputs have disjoint output supports.
    pub czero_positive: bool,
    /// Feedback zero-error capacity.
    pub czero_feedback: f64,
    /// Whether some input sees a zero another input does not.
    pub ceo_positive: bool,
    /// Feedback erasure-only capacity.
    pub ceo_feedback: f64,
    /// Cutoff-type rate max_P E0(rho, P)/rho.
    pub cutoff: f64,
    /// Upper bound from outputs reachable by every input; infinite when
    /// there is no such output.
    pub ambiguous_upper: f64,
    /// Upper bound on the feedback listsize capacity.
    pub calf_upper: f64,
    /// Exact feedback listsize capacity, known iff `czero_positive`.
    pub calf_exact: Option<f64>,
    /// Best lower bound on the feedback listsize capacity.
    pub calf_lower: f64,
    /// Best single-letter confirmation probability q*.
    pub q_star: f64,
    /// Achievable-rate part of `calf_lower` before flooring.
    pub feedback_lower_bound: f64,
}

/// Computes the full report. `tol` controls every inner solver; the
/// defaults elsewhere in the crate use 1e-9.
pub fn feedback_capacity_report(
    w: &Dmc,
    rho: f64,
    tol: f64,
) -> Result<CapacityReport, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    if !(tol > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }

    let shannon_c = shannon_capacity(w, tol.min(1e-9), MAX_ITER)?.capacity;
    let pi = pi0(w)?;
    let neg_log_pi0 = -pi.pi0.ln();
    let zero = czero_positive(w);
    let erasure = cal_positive(w);
    let cutoff = maximize_e0(rho, w, tol.min(1e-9), MAX_ITER)?.cutoff_rate;
    let ambiguous_upper = ambiguous_output_upper_bound(w, rho);
    let calf_upper = cutoff.min(ambiguous_upper);
    let fb = feedback_lower_bound(rho, w, XI_MAX_DEFAULT)?.value;

    let mut calf_lower = fb.max(0.0);
    if zero {
        calf_lower = calf_lower.max(neg_log_pi0);
    }

    let report = CapacityReport {
        rho,
        shannon_c,
        pi0: pi.pi0,
        neg_log_pi0,
        czero_positive: zero,
        czero_feedback: if zero { neg_log_pi0 } else { 0.0 },
        ceo_positive: erasure,
        ceo_feedback: if erasure { shannon_c } else { 0.0 },
        cutoff,
        ambiguous_upper,
        calf_upper,
        calf_exact: if zero { Some(calf_upper) } else { None },
        calf_lower,
        q_star: q_star(w).q_star,
        feedback_lower_bound: fb,
    };
    debug_assert!(report.calf_lower <= report.calf_upper + 1e-9);
    Ok(report)
}
