//! The auxiliary rate function R*(rho) and the feedback lower bound
//! built from it together with the confirmation probability q*.

use crate::channel::{cal_positive, q_star, Dmc, Pmf};
use crate::gallager::maximize_e0;
use crate::bounds::{BoundKind, BoundValue};
use crate::numeric::golden_section_max;
use crate::SolveError;

/// Smallest slope parameter the scan considers.
const XI_MIN: f64 = 1e-3;
/// Coarse log-grid size before golden-section refinement.
const COARSE_POINTS: usize = 25;
/// Width tolerance for the golden-section stage, in log-slope units.
const REFINE_TOL: f64 = 1e-6;
/// Inner solver settings for each slope evaluation. The tolerance stays
/// above (1 + xi) times the unit roundoff at the largest slopes scanned;
/// anything tighter asks the inner certificate for sub-noise residuals
/// and only triggers futile restarts.
const E0_TOL: f64 = 1e-9;
const E0_MAX_ITER: u64 = 400_000;

/// Maximizer data for sup over xi of max over P of E0(xi, P)/(xi + rho).
#[derive(Clone, Debug)]
pub struct RStarResult {
    /// The supremum value in nats.
    pub value: f64,
    /// Slope parameter attaining the supremum (up to scan tolerance).
    pub xi_star: f64,
    /// Input distribution attaining the supremum at `xi_star`.
    pub p_star: Pmf,
    pub rho: f64,
}

/// Computes R*(rho) by scanning the slope parameter xi over
/// [`XI_MIN`, xi_max] on a logarithmic grid and refining the best
/// bracket with golden-section search. The grid always contains both
/// endpoints; for channels whose objective keeps growing in xi the
/// supremum sits at xi_max itself.
pub fn r_star(rho: f64, w: &Dmc, xi_max: f64) -> Result<RStarResult, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    if !(xi_max > XI_MIN) || !xi_max.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "xi_max must exceed {XI_MIN} and be finite, got {xi_max}"
        )));
    }

    // Objective in log-slope coordinates. Solver failures at extreme
    // slopes count as unusable points rather than aborting the scan.
    let g = |t: f64| -> f64 {
        let xi = t.exp();
        match maximize_e0(xi, w, E0_TOL, E0_MAX_ITER) {
            Ok(r) => r.e0_value / (xi + rho),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let lo = XI_MIN.ln();
    let hi = xi_max.ln();
    let mut best_i = 0;
    let mut best_t = lo;
    let mut best_v = f64::NEG_INFINITY;
    let grid: Vec<f64> = (0..COARSE_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (COARSE_POINTS - 1) as f64)
        .collect();
    for (i, &t) in grid.iter().enumerate() {
        let v = g(t);
        if v > best_v {
            best_i = i;
            best_t = t;
            best_v = v;
        }
    }

    // Refine inside the bracket formed by the neighbors of the best
    // coarse point, then keep whichever of the two candidates wins.
    let a = grid[best_i.saturating_sub(1)];
    let b = grid[(best_i + 1).min(COARSE_POINTS - 1)];
    if b > a {
        let (t_ref, v_ref) = golden_section_max(g, a, b, REFINE_TOL);
        if v_ref > best_v {
            best_t = t_ref;
        }
    }

    let xi_star = best_t.exp();
    let sol = maximize_e0(xi_star, w, E0_TOL, E0_MAX_ITER)?;
    Ok(RStarResult {
        value: sol.e0_value / (xi_star + rho),
        xi_star,
        p_star: sol.p_star,
        rho,
    })
}

/// Lower bound on the feedback listsize capacity: R*(rho) shrunk by the
/// retransmission overhead factor 1 + rho R*/log(1/(1-q*)). When q* = 1
/// confirmations never fail and the bound equals R* itself; when no
/// zero-set pair exists at all the bound degenerates to zero.
pub fn feedback_lower_bound(rho: f64, w: &Dmc, xi_max: f64) -> Result<BoundValue, SolveError> {
    if !cal_positive(w) {
        return Ok(BoundValue::new(
            "feedback_lower_bound",
            BoundKind::Lower,
            0.0,
            rho,
        ));
    }
    let q = q_star(w).q_star;
    let rs = r_star(rho, w, xi_max)?;
    let value = if q >= 1.0 {
        rs.value
    } else {
        rs.value / (1.0 + rho * rs.value / (1.0 - q).recip().ln())
    };
    Ok(BoundValue::new("feedback_lower_bound", BoundKind::Lower, value, rho).with_p(rs.p_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::shannon_capacity;
    use crate::channel::fixtures;

    #[test]
    fn noiseless_r_star_approaches_log_alphabet() {
        for k in [2usize, 3, 5] {
            let w = fixtures::noiseless(k);
            let r = r_star(1.0, &w, 1e3).unwrap();
            let target = (k as f64).ln();
            assert!(
                r.value >= 0.999 * target,
                "k={k}: r*={} target={target}",
                r.value
            );
            assert!(r.value <= target + 1e-9);
            assert!((r.xi_star - 1e3).abs() < 1.0, "xi_star={}", r.xi_star);
        }
    }

    #[test]
    fn r_star_monotone_in_xi_max() {
        let w = fixtures::fig1(0.1);
        let small = r_star(1.0, &w, 10.0).unwrap().value;
        let large = r_star(1.0, &w, 1e3).unwrap().value;
        assert!(large >= small - 1e-9, "small={small} large={large}");
    }

    #[test]
    fn r_star_never_exceeds_capacity() {
        // E0(xi, P)/(xi + rho) <= E0(xi, P)/xi <= C for every xi > 0.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let w = fixtures::random_dense(&mut rng, 3, 3, 0.0);
            let c = shannon_capacity(&w, 1e-10, 200_000).unwrap().capacity;
            let r = r_star(0.5, &w, 100.0).unwrap();
            assert!(r.value <= c + 1e-6, "r*={} C={c}", r.value);
        }
    }

    #[test]
    fn confirmation_never_fails_keeps_full_rate() {
        // The ternary channel with two noiseless letters has q* = 1, so
        // the overhead factor disappears.
        let w = fixtures::fig1(0.1);
        let rs = r_star(1.0, &w, 1e3).unwrap().value;
        let fb = feedback_lower_bound(1.0, &w, 1e3).unwrap();
        assert_eq!(fb.value, rs);
        assert!(fb.p_used.is_some());
    }

    #[test]
    fn partial_confirmation_shrinks_the_bound() {
        let w = fixtures::fig2(0.01, 0.05);
        let rs = r_star(1.0, &w, 1e3).unwrap().value;
        let fb = feedback_lower_bound(1.0, &w, 1e3).unwrap().value;
        assert!(fb > 0.0);
        assert!(fb < rs, "fb={fb} rs={rs}");
        // Direct formula check with q* = 0.05.
        let expect = rs / (1.0 + rs / (1.0f64 - 0.05).recip().ln());
        assert!((fb - expect).abs() < 1e-12);
    }

    #[test]
    fn no_zero_set_means_zero_bound() {
        let w = fixtures::binary_symmetric(0.1);
        let fb = feedback_lower_bound(1.0, &w, 1e3).unwrap();
        assert_eq!(fb.value, 0.0);
        assert_eq!(fb.kind, BoundKind::Lower);
    }

    #[test]
    fn rejects_bad_parameters() {
        let w = fixtures::fig1(0.1);
        assert!(r_star(0.0, &w, 1e3).is_err());
        assert!(r_star(1.0, &w, 1e-4).is_err());
        assert!(r_star(f64::NAN, &w, 1e3).is_err());
    }
}
