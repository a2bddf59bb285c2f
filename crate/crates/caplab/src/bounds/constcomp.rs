//! Constant-composition characterizations of the erasure-only and
//! listsize quantities at a fixed input distribution, computed as
//! minimizations over auxiliary channels with an output-distribution
//! coupling constraint.

use crate::bounds::{BoundKind, BoundValue};
use crate::channel::{Dmc, Pmf};
use crate::SolveError;

/// Coupling constraint must close to this accuracy.
const COUPLING_TOL: f64 = 1e-10;
const MU_INIT: f64 = 10.0;
const MU_MAX: f64 = 1e8;
const OUTER_MAX: usize = 80;
const INNER_MAX: usize = 2_000;
const POLISH_MAX: usize = 500;
/// Exponent clamp for one multiplicative update.
const STEP_CLAMP: f64 = 40.0;

/// One solved constant-composition minimization.
#[derive(Clone, Debug)]
pub struct ConstCompProblem {
    /// Objective value at the returned (coupling-feasible) point. The
    /// point is feasible for a minimization, so the value can only sit
    /// above the true minimum, never below it.
    pub bound: BoundValue,
    /// Minimizing auxiliary channel.
    pub v: Dmc,
    /// Second auxiliary channel of the listsize problem.
    pub v_prime: Option<Dmc>,
    /// Final infinity-norm violation of the coupling constraint.
    pub coupling_residual: f64,
    /// Final first-order residual on the auxiliary-channel simplices.
    pub stationarity_residual: f64,
    pub iterations: u64,
}

/// Both constant-composition quantities at one input distribution.
#[derive(Clone, Debug)]
pub struct ConstCompSolution {
    /// min I(P, V) over V absolutely continuous w.r.t. W with PV = PW.
    pub ceo: ConstCompProblem,
    /// min I(P, V) + rho^{-1} D(V'||W|P) over pairs with PV = PV'.
    pub cal: ConstCompProblem,
}

#[derive(Clone, Copy)]
enum Kind {
    /// Coupling PV = PW with PW fixed at the start.
    Ceo,
    /// Coupling PV = PV' with the divergence term weighted by 1/rho.
    Cal { rho: f64 },
}

/// Computes both constant-composition bounds by the method of
/// multipliers: the coupling constraint is absorbed into an augmented
/// Lagrangian, each inner problem is solved by entropic mirror descent
/// on the rows of the auxiliary channels, and the penalty grows
/// tenfold, up to 1e8, whenever the violation stalls. Both runs start
/// from the feasible point V = V' = W.
pub fn const_comp_bounds(
    rho: f64,
    p: &[f64],
    w: &Dmc,
    tol: f64,
) -> Result<ConstCompSolution, SolveError> {
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
    assert_eq!(p.len(), w.num_inputs(), "input distribution length");
    let ceo = solve(Kind::Ceo, p, w, tol, rho)?;
    let cal = solve(Kind::Cal { rho }, p, w, tol, rho)?;
    Ok(ConstCompSolution { ceo, cal })
}

struct State {
    v: Vec<Vec<f64>>,
    vp: Vec<Vec<f64>>,
}

fn mixture(p: &[f64], rows: &[Vec<f64>], ny: usize) -> Vec<f64> {
    let mut q = vec![0.0; ny];
    for (x, row) in rows.iter().enumerate() {
        if p[x] > 0.0 {
            for (y, &v) in row.iter().enumerate() {
                q[y] += p[x] * v;
            }
        }
    }
    q
}

fn mutual_info_term(p: &[f64], rows: &[Vec<f64>], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, row) in rows.iter().enumerate() {
        if p[x] > 0.0 {
            for (y, &v) in row.iter().enumerate() {
                if v > 0.0 {
                    acc += p[x] * v * (v / q[y]).ln();
                }
            }
        }
    }
    acc.max(0.0)
}

fn divergence_term(p: &[f64], rows: &[Vec<f64>], w: &Dmc) -> f64 {
    let mut acc = 0.0;
    for (x, row) in rows.iter().enumerate() {
        if p[x] > 0.0 {
            for (y, &v) in row.iter().enumerate() {
                if v > 0.0 {
                    acc += p[x] * v * (v / w.w(x, y)).ln();
                }
            }
        }
    }
    acc.max(0.0)
}

fn solve(
    kind: Kind,
    p: &[f64],
    w: &Dmc,
    tol: f64,
    rho: f64,
) -> Result<ConstCompProblem, SolveError> {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let q0 = w.output_distribution(p);
    let is_cal = matches!(kind, Kind::Cal { .. });

    let start: Vec<Vec<f64>> = (0..nx).map(|x| w.row(x).to_vec()).collect();
    let mut st = State {
        v: start.clone(),
        vp: start,
    };
    let mut lambda = vec![0.0; ny];
    let mut mu = MU_INIT;
    let mut prev_violation = f64::INFINITY;
    let mut iterations = 0u64;
    let inner_tol = (0.5 * tol).max(1e-12);

    let coupling = |st: &State| -> Vec<f64> {
        let qv = mixture(p, &st.v, ny);
        match kind {
            Kind::Ceo => (0..ny).map(|y| qv[y] - q0[y]).collect(),
            Kind::Cal { .. } => {
                let qp = mixture(p, &st.vp, ny);
                (0..ny).map(|y| qv[y] - qp[y]).collect()
            }
        }
    };
    let objective = |st: &State| -> f64 {
        let qv = mixture(p, &st.v, ny);
        let mut val = mutual_info_term(p, &st.v, &qv);
        if let Kind::Cal { rho } = kind {
            val += divergence_term(p, &st.vp, w) / rho;
        }
        val
    };
    let al_value = |st: &State, lambda: &[f64], mu: f64| -> f64 {
        let c = coupling(st);
        let mut val = objective(st);
        for y in 0..ny {
            val += lambda[y] * c[y] + 0.5 * mu * c[y] * c[y];
        }
        val
    };

    // Per-row gradients of the augmented Lagrangian divided by p(x),
    // which is the natural scale for a mirror step on each row simplex.
    let gradients = |st: &State, lambda: &[f64], mu: f64| -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let c = coupling(st);
        let qv = mixture(p, &st.v, ny);
        let mut gv = vec![vec![0.0; ny]; nx];
        let mut gp = vec![vec![0.0; ny]; nx];
        for x in 0..nx {
            if p[x] <= 0.0 {
                continue;
            }
            for y in 0..ny {
                if w.w(x, y) > 0.0 {
                    let v = st.v[x][y].max(1e-300);
                    gv[x][y] = (v / qv[y].max(1e-300)).ln() + lambda[y] + mu * c[y];
                    if is_cal {
                        let vp = st.vp[x][y].max(1e-300);
                        gp[x][y] =
                            ((vp / w.w(x, y)).ln() + 1.0) / rho - lambda[y] - mu * c[y];
                    }
                }
            }
        }
        (gv, gp)
    };

    // First-order residual for minimization over each row simplex:
    // interior coordinates must share the row mean, zero coordinates
    // must not want to grow.
    let stationarity = |rows: &[Vec<f64>], grads: &[Vec<f64>]| -> f64 {
        let mut worst = 0.0f64;
        for x in 0..nx {
            if p[x] <= 0.0 {
                continue;
            }
            let mean: f64 = (0..ny).map(|y| rows[x][y] * grads[x][y]).sum();
            for y in 0..ny {
                if w.w(x, y) > 0.0 {
                    let r = if rows[x][y] > 0.0 {
                        (grads[x][y] - mean).abs()
                    } else {
                        (mean - grads[x][y]).max(0.0)
                    };
                    worst = worst.max(r);
                }
            }
        }
        worst
    };

    let step_rows = |rows: &[Vec<f64>], grads: &[Vec<f64>], eta: f64| -> Vec<Vec<f64>> {
        let mut out = rows.to_vec();
        for x in 0..nx {
            if p[x] <= 0.0 {
                continue;
            }
            let mean: f64 = (0..ny).map(|y| rows[x][y] * grads[x][y]).sum();
            let mut sum = 0.0;
            for y in 0..ny {
                if w.w(x, y) > 0.0 && rows[x][y] > 0.0 {
                    let e = (-eta * (grads[x][y] - mean)).clamp(-STEP_CLAMP, STEP_CLAMP);
                    out[x][y] = rows[x][y] * e.exp();
                } else {
                    out[x][y] = 0.0;
                }
                sum += out[x][y];
            }
            if sum > 0.0 {
                for y in 0..ny {
                    out[x][y] /= sum;
                }
            } else {
                out[x].copy_from_slice(rows[x].as_slice());
            }
        }
        out
    };

    // Rescales the auxiliary channels so the coupling closes exactly,
    // alternating a column correction with row renormalization.
    let polish = |st: &mut State| {
        for _ in 0..POLISH_MAX {
            let qv = mixture(p, &st.v, ny);
            let target: Vec<f64> = match kind {
                Kind::Ceo => q0.clone(),
                Kind::Cal { .. } => {
                    let qp = mixture(p, &st.vp, ny);
                    (0..ny).map(|y| 0.5 * (qv[y] + qp[y])).collect()
                }
            };
            let mut worst = 0.0f64;
            for y in 0..ny {
                worst = worst.max((qv[y] - target[y]).abs());
            }
            if is_cal {
                let qp = mixture(p, &st.vp, ny);
                for y in 0..ny {
                    worst = worst.max((qp[y] - target[y]).abs());
                }
            }
            if worst <= 0.1 * COUPLING_TOL {
                break;
            }
            scale_to_target(p, &mut st.v, &qv, &target);
            if is_cal {
                let qp = mixture(p, &st.vp, ny);
                scale_to_target(p, &mut st.vp, &qp, &target);
            }
        }
    };

    let mut eta = 0.5;
    for _outer in 0..OUTER_MAX {
        // Inner minimization of the augmented Lagrangian.
        let mut value = al_value(&st, &lambda, mu);
        for _ in 0..INNER_MAX {
            iterations += 1;
            let (gv, gp) = gradients(&st, &lambda, mu);
            let stat = stationarity(&st.v, &gv)
                .max(if is_cal { stationarity(&st.vp, &gp) } else { 0.0 });
            if stat <= inner_tol {
                break;
            }
            let mut accepted = false;
            let mut try_eta = eta;
            while try_eta > 1e-14 {
                let cand = State {
                    v: step_rows(&st.v, &gv, try_eta),
                    vp: if is_cal {
                        step_rows(&st.vp, &gp, try_eta)
                    } else {
                        st.vp.clone()
                    },
                };
                let cv = al_value(&cand, &lambda, mu);
                if cv < value {
                    st = cand;
                    value = cv;
                    eta = (try_eta * 1.6).min(4.0);
                    accepted = true;
                    break;
                }
                try_eta *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        // The multiplier update must see the raw inner-solution coupling;
        // feasibility polishing happens on a separate candidate, because a
        // polished (feasible) state would freeze lambda at its start and
        // the constrained optimum could never become stationary.
        let c_raw = coupling(&st);
        let violation_raw = c_raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut cand = State {
            v: st.v.clone(),
            vp: st.vp.clone(),
        };
        polish(&mut cand);
        let c_pol = coupling(&cand);
        let violation = c_pol.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (gv, gp) = gradients(&cand, &lambda, 0.0);
        let stat = stationarity(&cand.v, &gv)
            .max(if is_cal { stationarity(&cand.vp, &gp) } else { 0.0 });
        if violation <= COUPLING_TOL && stat <= tol {
            let value = objective(&cand);
            return Ok(finish(kind, cand, p, w, value, violation, stat, lambda, iterations));
        }
        for y in 0..ny {
            lambda[y] += mu * c_raw[y];
        }
        if violation_raw > 0.25 * prev_violation {
            mu = (mu * 10.0).min(MU_MAX);
        }
        prev_violation = violation_raw;
    }

    let mut cand = State {
        v: st.v.clone(),
        vp: st.vp.clone(),
    };
    polish(&mut cand);
    let c = coupling(&cand);
    let violation = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (gv, gp) = gradients(&cand, &lambda, 0.0);
    let stat = stationarity(&cand.v, &gv)
        .max(if is_cal { stationarity(&cand.vp, &gp) } else { 0.0 });
    Err(SolveError::NonConvergence {
        residual: violation.max(stat),
        tol,
        iterations,
    })
}

/// Multiplies each column by target/current and renormalizes rows,
/// skipping empty columns.
fn scale_to_target(p: &[f64], rows: &mut [Vec<f64>], current: &[f64], target: &[f64]) {
    let ny = current.len();
    for x in 0..rows.len() {
        if p[x] <= 0.0 {
            continue;
        }
        let mut sum = 0.0;
        for y in 0..ny {
            if current[y] > 0.0 && rows[x][y] > 0.0 {
                rows[x][y] *= target[y] / current[y];
            }
            sum += rows[x][y];
        }
        if sum > 0.0 {
            for y in 0..ny {
                rows[x][y] /= sum;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: Kind,
    st: State,
    p: &[f64],
    w: &Dmc,
    value: f64,
    coupling: f64,
    stationarity: f64,
    lambda: Vec<f64>,
    iterations: u64,
) -> ConstCompProblem {
    let (name, rho) = match kind {
        Kind::Ceo => ("const_comp_ceo", f64::INFINITY),
        Kind::Cal { rho } => ("const_comp_cal", rho),
    };
    let bound = BoundValue::new(name, BoundKind::Upper, value, rho)
        .with_p(Pmf::new(p.to_vec()).expect("input distribution"))
        .with_certificate(coupling.max(stationarity), lambda);
    ConstCompProblem {
        bound,
        v: clean_channel(&st.v, w),
        v_prime: matches!(kind, Kind::Cal { .. }).then(|| clean_channel(&st.vp, w)),
        coupling_residual: coupling,
        stationarity_residual: stationarity,
        iterations,
    }
}

/// Drops underflow-scale entries and renormalizes so the rows pass
/// channel validation.
fn clean_channel(rows: &[Vec<f64>], w: &Dmc) -> Dmc {
    let cleaned: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let mut r: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(y, &v)| if w.w(x, y) > 0.0 && v > 1e-250 { v } else { 0.0 })
                .collect();
            let s: f64 = r.iter().sum();
            if s > 0.0 {
                r.iter_mut().for_each(|v| *v /= s);
            } else {
                r.copy_from_slice(w.row(x));
            }
            r
        })
        .collect();
    Dmc::from_rows(cleaned).expect("cleaned auxiliary channel")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{forney_cal_rho_bound, forney_ceo_bound};
    use crate::channel::fixtures;

    #[test]
    fn noiseless_channel_admits_only_itself() {
        // Single-point row supports force V = V' = W, so both values
        // equal the mutual information log 2.
        let w = fixtures::noiseless(2);
        let p = [0.5, 0.5];
        let sol = const_comp_bounds(1.0, &p, &w, 1e-7).unwrap();
        assert!((sol.ceo.bound.value - 2.0f64.ln()).abs() < 1e-9);
        assert!((sol.cal.bound.value - 2.0f64.ln()).abs() < 1e-9);
        assert!(sol.ceo.coupling_residual <= COUPLING_TOL);
        assert!(sol.cal.coupling_residual <= COUPLING_TOL);
    }

    #[test]
    fn erasure_channel_erasure_only_value_is_pinned() {
        // The coupling constraint admits exactly one feasible V for the
        // erasure channel, namely W itself.
        for delta in [0.2, 0.5, 0.8] {
            let w = fixtures::binary_erasure(delta);
            let p = [0.5, 0.5];
            let sol = const_comp_bounds(1.0, &p, &w, 1e-7).unwrap();
            let expect = (1.0 - delta) * 2.0f64.ln();
            assert!(
                (sol.ceo.bound.value - expect).abs() < 1e-6,
                "delta={delta}: {} vs {expect}",
                sol.ceo.bound.value
            );
        }
    }

    #[test]
    fn listsize_value_sits_between_its_brackets() {
        let w = fixtures::binary_erasure(0.5);
        let p = [0.5, 0.5];
        let sol = const_comp_bounds(1.0, &p, &w, 1e-7).unwrap();
        let lower = forney_cal_rho_bound(1.0, &p, &w).unwrap();
        let start = 0.5 * 2.0f64.ln();
        assert!(sol.cal.bound.value >= lower - 1e-7);
        assert!(sol.cal.bound.value <= start + 1e-9);
        assert!(sol.cal.v_prime.is_some());
    }

    #[test]
    fn dense_channels_collapse_to_zero() {
        // With full support the output distribution itself is a
        // feasible auxiliary channel, so both minima vanish.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(92);
        for _ in 0..3 {
            let w = fixtures::random_dense(&mut rng, 3, 3, 0.05);
            let p = [0.3, 0.4, 0.3];
            let sol = const_comp_bounds(1.0, &p, &w, 1e-6).unwrap();
            assert!(sol.ceo.bound.value <= 1e-4, "ceo {}", sol.ceo.bound.value);
            assert!(sol.cal.bound.value <= 1e-4, "cal {}", sol.cal.bound.value);
        }
    }

    #[test]
    fn values_dominate_the_zero_set_bounds() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(93);
        for trial in 0..4 {
            let w = fixtures::random_sparse(&mut rng, 3, 3, 0.6);
            let p = crate::numeric::random_simplex_point(&mut rng, 3);
            for rho in [0.5, 2.0] {
                let sol = match const_comp_bounds(rho, &p, &w, 1e-6) {
                    Ok(s) => s,
                    Err(SolveError::NonConvergence { .. }) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                };
                let f_ceo = forney_ceo_bound(&p, &w);
                let f_cal = forney_cal_rho_bound(rho, &p, &w).unwrap();
                assert!(
                    sol.ceo.bound.value >= f_ceo - 1e-7,
                    "trial {trial} rho {rho}: {} vs {f_ceo}",
                    sol.ceo.bound.value
                );
                assert!(
                    sol.cal.bound.value >= f_cal - 1e-7,
                    "trial {trial} rho {rho}: {} vs {f_cal}",
                    sol.cal.bound.value
                );
                assert!(sol.ceo.coupling_residual <= COUPLING_TOL);
                assert!(sol.cal.coupling_residual <= COUPLING_TOL);
            }
        }
    }

    #[test]
    fn zero_mass_inputs_are_ignored() {
        let w = fixtures::fig1(0.1);
        let p = [0.5, 0.5, 0.0];
        let sol = const_comp_bounds(1.0, &p, &w, 1e-6).unwrap();
        assert!(sol.ceo.bound.value.is_finite());
        // The untouched row stays equal to the channel row.
        assert_eq!(sol.ceo.v.row(2), w.row(2));
    }

    #[test]
    fn rejects_bad_parameters() {
        let w = fixtures::fig1(0.1);
        let p = [1.0 / 3.0; 3];
        assert!(const_comp_bounds(0.0, &p, &w, 1e-6).is_err());
        assert!(const_comp_bounds(1.0, &p, &w, 0.0).is_err());
    }
}
