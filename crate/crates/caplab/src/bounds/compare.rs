//! Side-by-side evaluation of every bound the crate computes for one
//! channel and exponent, with the provable orderings between them
//! checked numerically.

use crate::bounds::{
    const_comp_bounds, feedback_lower_bound, maximize_forney, maximize_forney_ceo, BoundKind,
    BoundValue, BOUND_CSV_HEADER,
};
use crate::capacity::{pi0, shannon_capacity};
use crate::channel::{ambiguous_output_upper_bound, czero_positive, Dmc};
use crate::gallager::maximize_e0;
use crate::SolveError;

const XI_MAX: f64 = 1e3;
const RESTARTS: usize = 4;
const MAX_ITER: u64 = 1_000_000;
/// Slack for the ordering checks, generous against solver noise.
const ORDER_SLACK: f64 = 1e-7;

/// One provable inequality between two computed bounds.
#[derive(Clone, Debug)]
pub struct OrderingCheck {
    /// Statement of the form "a <= b".
    pub description: String,
    /// Whether the inequality held to within the slack.
    pub holds: bool,
    /// Right side minus left side; nonnegative when the ordering holds
    /// exactly.
    pub slack: f64,
}

/// Every bound for one channel at one exponent plus the verified
/// orderings between them.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub rho: f64,
    pub bounds: Vec<BoundValue>,
    pub orderings: Vec<OrderingCheck>,
    /// Bounds that were skipped, with the reason.
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn value_of(&self, name: &str) -> Option<f64> {
        self.bounds.iter().find(|b| b.name == name).map(|b| b.value)
    }

    /// Renders the bounds as CSV with the crate-wide column layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUND_CSV_HEADER);
        out.push('\n');
        for b in &self.bounds {
            out.push_str(&b.csv_row());
            out.push('\n');
        }
        out
    }
}

fn check(orderings: &mut Vec<OrderingCheck>, lo_name: &str, lo: f64, hi_name: &str, hi: f64) {
    orderings.push(OrderingCheck {
        description: format!("{lo_name} <= {hi_name}"),
        holds: lo <= hi + ORDER_SLACK,
        slack: hi - lo,
    });
}

/// Retries a certified solve at twice the achieved residual when it
/// stalls, recording the relaxation as a note. The repeated run is
/// deterministic, so the accepted value is the stalled best-effort point
/// and its certificate carries the honestly achieved residual.
fn with_relaxed_retry<T>(
    name: &str,
    notes: &mut Vec<String>,
    mut solve: impl FnMut(f64) -> Result<T, SolveError>,
    tol: f64,
) -> Result<T, SolveError> {
    match solve(tol) {
        Err(SolveError::NonConvergence { residual, .. }) => {
            let relaxed = 2.0 * residual;
            notes.push(format!(
                "{name} stalled at residual {residual:.3e}; accepted at relaxed tolerance {relaxed:.3e}"
            ));
            solve(relaxed)
        }
        r => r,
    }
}

/// Computes every bound for `w` at exponent `rho` and records the
/// orderings that must hold between them. Each constant-composition
/// entry is evaluated at the input distribution maximizing its zero-set
/// counterpart and is skipped, with a note, if its solver stalls.
///
/// The capacity and exponent solvers run at `tol`; if one stalls below
/// that (ill-conditioned channels may not certify much below 1e-8 in
/// f64), its best-effort value is kept with the achieved residual in the
/// certificate and a note in the report. The ordering checks use a fixed
/// slack of 1e-7, well above every observed stall residual.
pub fn bound_comparison_report(
    w: &Dmc,
    rho: f64,
    tol: f64,
) -> Result<ComparisonReport, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    let solver_tol = tol.min(1e-9);
    let mut bounds = Vec::new();
    let mut notes = Vec::new();

    let cap = with_relaxed_retry(
        "shannon_capacity",
        &mut notes,
        |t| shannon_capacity(w, t, MAX_ITER),
        solver_tol,
    )?;
    bounds.push(
        BoundValue::new("shannon_capacity", BoundKind::Upper, cap.capacity, rho)
            .with_p(cap.p_star.clone())
            .with_certificate(cap.gap.max(0.0), Vec::new()),
    );

    let e0 = with_relaxed_retry(
        "cutoff",
        &mut notes,
        |t| maximize_e0(rho, w, t, MAX_ITER),
        solver_tol,
    )?;
    bounds.push(
        BoundValue::new("cutoff", BoundKind::Upper, e0.cutoff_rate, rho)
            .with_p(e0.p_star.clone())
            .with_certificate(e0.kkt_residual.max(0.0), Vec::new()),
    );

    let amb = ambiguous_output_upper_bound(w, rho);
    bounds.push(BoundValue::new(
        "ambiguous_upper",
        BoundKind::Upper,
        amb,
        rho,
    ));

    let zero = czero_positive(w);
    let pi = pi0(w)?;
    if zero {
        bounds.push(
            BoundValue::new("neg_log_pi0", BoundKind::Lower, -pi.pi0.ln(), rho)
                .with_p(pi.p_star.clone())
                .with_certificate(pi.duality_gap.max(0.0), pi.duals.clone()),
        );
        bounds.push(BoundValue::new(
            "zero_error_pair_rate",
            BoundKind::Lower,
            2.0f64.ln(),
            rho,
        ));
    }

    let f_cal = maximize_forney(rho, w, RESTARTS)?;
    let f_ceo = maximize_forney_ceo(w, RESTARTS)?;
    let fb = feedback_lower_bound(rho, w, XI_MAX)?;
    let p_cal = f_cal
        .p_used
        .clone()
        .expect("maximized bound carries its distribution");
    let p_ceo = f_ceo
        .p_used
        .clone()
        .expect("maximized bound carries its distribution");

    let (cal_v, ceo_v, fb_v) = (f_cal.value, f_ceo.value, fb.value);
    bounds.push(f_cal);
    bounds.push(f_ceo);
    bounds.push(fb);

    // The constant-composition values dominate the zero-set bounds only
    // at a shared input distribution, so each kind is evaluated at the
    // distribution maximizing its own zero-set counterpart.
    let mut cc_ceo = None;
    match const_comp_bounds(rho, &p_ceo, w, 1e-6) {
        Ok(sol) => {
            cc_ceo = Some(sol.ceo.bound.value);
            bounds.push(sol.ceo.bound);
        }
        Err(SolveError::NonConvergence {
            residual,
            iterations,
            ..
        }) => notes.push(format!(
            "const_comp_ceo skipped: residual {residual:.3e} after {iterations} iterations"
        )),
        Err(e) => return Err(e),
    }
    let mut cc_cal = None;
    match const_comp_bounds(rho, &p_cal, w, 1e-6) {
        Ok(sol) => {
            cc_cal = Some(sol.cal.bound.value);
            bounds.push(sol.cal.bound);
        }
        Err(SolveError::NonConvergence {
            residual,
            iterations,
            ..
        }) => notes.push(format!(
            "const_comp_cal skipped: residual {residual:.3e} after {iterations} iterations"
        )),
        Err(e) => return Err(e),
    }

    let calf_upper = e0.cutoff_rate.min(amb);
    let mut orderings = Vec::new();
    check(
        &mut orderings,
        "forney_cal_rho",
        cal_v,
        "cutoff",
        e0.cutoff_rate,
    );
    check(&mut orderings, "forney_ceo", ceo_v, "shannon_capacity", cap.capacity);
    check(&mut orderings, "feedback_lower_bound", fb_v, "calf_upper", calf_upper);
    if zero {
        check(
            &mut orderings,
            "neg_log_pi0",
            -pi.pi0.ln(),
            "cutoff",
            e0.cutoff_rate,
        );
        check(
            &mut orderings,
            "zero_error_pair_rate",
            2.0f64.ln(),
            "shannon_capacity",
            cap.capacity,
        );
    }
    if let Some(cc) = cc_ceo {
        check(&mut orderings, "forney_ceo", ceo_v, "const_comp_ceo", cc);
    }
    if let Some(cc) = cc_cal {
        check(&mut orderings, "forney_cal_rho", cal_v, "const_comp_cal", cc);
    }

    Ok(ComparisonReport {
        rho,
        bounds,
        orderings,
        notes,
    })
}
