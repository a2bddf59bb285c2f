//! Lower and upper bounds on listsize and erasure-only capacities: the
//! closed-form zero-set bounds and their variational twin, n-letter
//! evaluation, constant-composition bounds via convex optimization, the
//! feedback lower bound built on R*(rho), and a comparison harness.

mod compare;
mod constcomp;
mod forney;
mod nletter;
mod rstar;

pub use compare::{bound_comparison_report, ComparisonReport, OrderingCheck};
pub use constcomp::{const_comp_bounds, ConstCompProblem, ConstCompSolution};
pub use forney::{
    forney_cal_rho_bound, forney_ceo_bound, forney_variational_form, maximize_forney,
    maximize_forney_ceo,
};
pub use nletter::{n_letter_forney, NLetterMode};
pub use rstar::{feedback_lower_bound, r_star, RStarResult};

use crate::channel::Pmf;

/// Direction of a bound relative to the quantity it brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Lower => write!(f, "lower"),
            BoundKind::Upper => write!(f, "upper"),
        }
    }
}

/// Optimality certificate attached to a solver-produced bound.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// Nonnegative stationarity or duality residual.
    pub residual: f64,
    /// Dual variables backing the residual, when the solver produces any.
    pub duals: Vec<f64>,
}

/// A named bound value in nats. Infinities follow extended-real
/// conventions; `value` is `+inf` for a vacuous upper bound.
#[derive(Clone, Debug)]
pub struct BoundValue {
    pub name: String,
    pub kind: BoundKind,
    pub value: f64,
    pub rho: f64,
    /// Input distribution the bound was evaluated at, when one applies.
    pub p_used: Option<Pmf>,
    pub certificate: Option<Certificate>,
}

impl BoundValue {
    pub fn new(name: &str, kind: BoundKind, value: f64, rho: f64) -> Self {
        BoundValue {
            name: name.to_string(),
            kind,
            value,
            rho,
            p_used: None,
            certificate: None,
        }
    }

    pub fn with_p(mut self, p: Pmf) -> Self {
        self.p_used = Some(p);
        self
    }

    pub fn with_certificate(mut self, residual: f64, duals: Vec<f64>) -> Self {
        debug_assert!(residual >= 0.0);
        self.certificate = Some(Certificate { residual, duals });
        self
    }

    /// One CSV row: name, kind, value_nats, rho, p_vector,
    /// certificate_residual. The p vector is semicolon-separated so the
    /// row stays valid CSV.
    pub fn csv_row(&self) -> String {
        let p = self
            .p_used
            .as_ref()
            .map(|p| {
                p.iter()
                    .map(|v| format!("{v:.12}"))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default();
        let res = self
            .certificate
            .as_ref()
            .map(|c| format!("{:.3e}", c.residual))
            .unwrap_or_default();
        format!(
            "{},{},{:.12},{},{},{}",
            self.name, self.kind, self.value, self.rho, p, res
        )
    }
}

/// Header matching [`BoundValue::csv_row`].
pub const BOUND_CSV_HEADER: &str = "name,kind,value_nats,rho,p_vector,certificate_residual";
