//! Limit behavior of the normalized exponent rho -> E0(rho)/rho: it
//! decreases from the Shannon capacity (rho -> 0) toward -log pi0
//! (rho -> infinity), which ties the Gallager machinery to the zero-error
//! feedback quantity computed by the LP.

use crate::capacity::{pi0, shannon_capacity};
use crate::channel::Dmc;
use crate::gallager::maximize_e0;
use crate::SolveError;

/// One grid entry.
#[derive(Debug, Clone)]
pub struct E0LimitRow {
    pub rho: f64,
    /// max_P E0(rho, P)/rho.
    pub cutoff: f64,
    /// Optimizer certificate at this rho.
    pub residual: f64,
}

/// Cutoff-style rates over a rho grid with the two reference limits.
#[derive(Debug, Clone)]
pub struct E0LimitDiagnostics {
    pub rows: Vec<E0LimitRow>,
    /// Shannon capacity (the rho -> 0 limit).
    pub capacity: f64,
    /// -log pi0 (the rho -> infinity limit).
    pub neg_log_pi0: f64,
    /// Whether the cutoff column is nonincreasing along the grid.
    pub monotone_nonincreasing: bool,
}

/// Evaluates max_P E0/rho over `rho_grid` (which must be positive and
/// sorted ascending) and compares against the two limit values.
pub fn e0_limit_diagnostics(
    w: &Dmc,
    rho_grid: &[f64],
    tol: f64,
) -> Result<E0LimitDiagnostics, SolveError> {
    if rho_grid.is_empty() || rho_grid.iter().any(|&r| r <= 0.0) {
        return Err(SolveError::InvalidArgument(
            "rho grid must be nonempty and positive".into(),
        ));
    }
    if rho_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(SolveError::InvalidArgument(
            "rho grid must be sorted strictly ascending".into(),
        ));
    }
    let mut rows = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        let r = maximize_e0(rho, w, tol, 400_000)?;
        rows.push(E0LimitRow {
            rho,
            cutoff: r.cutoff_rate,
            residual: r.kkt_residual,
        });
    }
    // Certified values can wiggle by the optimizer tolerance, so the
    // monotonicity check allows that much slack.
    let monotone = rows
        .windows(2)
        .all(|p| p[1].cutoff <= p[0].cutoff + 10.0 * tol.max(1e-12));
    let cap = shannon_capacity(w, 1e-10, 1_000_000)?;
    let lp = pi0(w)?;
    Ok(E0LimitDiagnostics {
        rows,
        capacity: cap.capacity,
        neg_log_pi0: -lp.pi0.ln(),
        monotone_nonincreasing: monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    #[test]
    fn bsc_small_rho_approaches_capacity() {
        let w = fixtures::binary_symmetric(0.1);
        let d = e0_limit_diagnostics(&w, &[1e-3], 1e-9).unwrap();
        let hb = |p: f64| -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        let c = std::f64::consts::LN_2 - hb(0.1);
        assert!((d.capacity - c).abs() < 1e-6);
        assert!((d.rows[0].cutoff - c).abs() < 1e-3);
    }

    #[test]
    fn fig1_large_rho_approaches_neg_log_pi0() {
        let w = fixtures::fig1(0.1);
        let d = e0_limit_diagnostics(&w, &[100.0], 1e-9).unwrap();
        assert!((d.neg_log_pi0 - std::f64::consts::LN_2).abs() < 1e-9);
        assert!((d.rows[0].cutoff - d.neg_log_pi0).abs() < 0.05);
    }

    #[test]
    fn cutoff_grid_is_nonincreasing() {
        let w = fixtures::fig2(0.05, 0.3);
        let d = e0_limit_diagnostics(&w, &[0.5, 1.0, 2.0], 1e-9).unwrap();
        assert!(d.monotone_nonincreasing);
        assert!(d.rows[0].cutoff <= d.capacity + 1e-6);
    }

    #[test]
    fn grid_validation() {
        let w = fixtures::binary_symmetric(0.1);
        assert!(e0_limit_diagnostics(&w, &[], 1e-9).is_err());
        assert!(e0_limit_diagnostics(&w, &[1.0, 0.5], 1e-9).is_err());
        assert!(e0_limit_diagnostics(&w, &[-1.0, 0.5], 1e-9).is_err());
    }
}
