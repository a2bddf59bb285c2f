//! The minimax zero-set value pi0 = min_P max_y P(X(y)) as a linear
//! program, plus an exact brute-force grid search used as an oracle.

use super::lp::{solve_lp, Constraint, Lp, LpRow};
use crate::channel::Dmc;
use crate::channel::Pmf;
use crate::SolveError;

/// Optimal value of the minimax program with its certificates.
#[derive(Clone, Debug)]
pub struct Pi0Result {
    /// min over input PMFs of max over outputs of P(X(y)).
    pub pi0: f64,
    /// A minimizing input distribution.
    pub p_star: Pmf,
    /// Dual certificate: a nonnegative weighting of the outputs summing to
    /// at most one with min_x sum_{y: x in X(y)} duals[y] = pi0.
    pub duals: Vec<f64>,
    /// Verified primal-dual gap of the underlying linear program.
    pub duality_gap: f64,
}

/// Solves `min t` subject to `sum_{x in X(y)} P(x) <= t` for every output
/// and `sum_x P(x) = 1` over nonnegative P.
pub fn pi0(w: &Dmc) -> Result<Pi0Result, SolveError> {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    // Variables are [P(0), ..., P(nx-1), t].
    let mut rows = Vec::with_capacity(ny + 1);
    for y in 0..ny {
        let mut coeffs = vec![0.0; nx + 1];
        for x in 0..nx {
            if w.w(x, y) > 0.0 {
                coeffs[x] = 1.0;
            }
        }
        coeffs[nx] = -1.0;
        rows.push(LpRow {
            coeffs,
            sense: Constraint::Le,
            rhs: 0.0,
        });
    }
    let mut sum_row = vec![1.0; nx + 1];
    sum_row[nx] = 0.0;
    rows.push(LpRow {
        coeffs: sum_row,
        sense: Constraint::Eq,
        rhs: 1.0,
    });
    let mut objective = vec![0.0; nx + 1];
    objective[nx] = 1.0;

    let sol = solve_lp(&Lp { objective, rows })
        .map_err(|e| SolveError::Infeasible(format!("pi0 program: {e}")))?;

    let mut p: Vec<f64> = sol.x[..nx].to_vec();
    let total: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= total;
    }
    // Output-side certificate in its natural sign: lambda_y >= 0 with
    // sum lambda <= 1 and value min_x sum_{y owning x} lambda_y.
    let duals: Vec<f64> = sol.duals[..ny].iter().map(|d| (-d).max(0.0)).collect();
    Ok(Pi0Result {
        pi0: sol.x[nx],
        p_star: Pmf::new(p).map_err(SolveError::Channel)?,
        duals,
        duality_gap: sol.gap,
    })
}

/// Exact minimum of `max_y P(X(y))` over the lattice of input PMFs with
/// denominator `round(1/step)`. All arithmetic is integer, so the returned
/// value is the exact grid optimum.
///
/// The innermost coordinate is optimized by ternary search, which is exact
/// here because the objective is a maximum of affine functions of that
/// coordinate and hence convex.
pub fn pi0_grid_search(w: &Dmc, step: f64) -> f64 {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let n = (1.0 / step).round().max(1.0) as i64;
    // memb[x][y] = 1 when x is in X(y).
    let memb: Vec<Vec<i64>> = (0..nx)
        .map(|x| (0..ny).map(|y| i64::from(w.w(x, y) > 0.0)).collect())
        .collect();
    if nx == 1 {
        return 1.0;
    }

    let mut partial = vec![0i64; ny];
    let best = grid_recurse(&memb, 0, n, &mut partial);
    best as f64 / n as f64
}

/// Minimizes over counts for inputs `x..` summing to `rem`, given the
/// weighted output counts of the inputs already fixed.
fn grid_recurse(memb: &[Vec<i64>], x: usize, rem: i64, partial: &mut [i64]) -> i64 {
    let ny = partial.len();
    if x + 2 == memb.len() {
        let a = &memb[x];
        let b = &memb[x + 1];
        let f = |c: i64| -> i64 {
            (0..ny)
                .map(|y| partial[y] + c * a[y] + (rem - c) * b[y])
                .max()
                .unwrap()
        };
        return ternary_min(0, rem, f);
    }
    let mut best = i64::MAX;
    for c in 0..=rem {
        if c > 0 {
            for (pv, m) in partial.iter_mut().zip(&memb[x]) {
                *pv += m;
            }
        }
        best = best.min(grid_recurse(memb, x + 1, rem - c, partial));
    }
    for (pv, m) in partial.iter_mut().zip(&memb[x]) {
        *pv -= rem * m;
    }
    best
}

/// Exact minimum of a convex integer function on [lo, hi].
fn ternary_min<F: Fn(i64) -> i64>(lo0: i64, hi0: i64, f: F) -> i64 {
    let (mut lo, mut hi) = (lo0, hi0);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if f(m1) <= f(m2) {
            hi = m2 - 1;
        } else {
            lo = m1 + 1;
        }
    }
    (lo..=hi).map(f).min().expect("nonempty range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    /// Plain full enumeration over the grid, used to validate the ternary
    /// search shortcut.
    fn grid_naive(w: &Dmc, n: i64) -> f64 {
        let nx = w.num_inputs();
        let ny = w.num_outputs();
        let memb: Vec<Vec<i64>> = (0..nx)
            .map(|x| (0..ny).map(|y| i64::from(w.w(x, y) > 0.0)).collect())
            .collect();
        fn rec(memb: &[Vec<i64>], x: usize, rem: i64, counts: &mut [i64], best: &mut i64) {
            if x + 1 == memb.len() {
                counts[x] = rem;
                let ny = memb[0].len();
                let v = (0..ny)
                    .map(|y| {
                        (0..memb.len()).map(|i| counts[i] * memb[i][y]).sum::<i64>()
                    })
                    .max()
                    .unwrap();
                *best = (*best).min(v);
                return;
            }
            for c in 0..=rem {
                counts[x] = c;
                rec(memb, x + 1, rem - c, counts, best);
            }
        }
        let mut counts = vec![0i64; nx];
        let mut best = i64::MAX;
        rec(&memb, 0, n, &mut counts, &mut best);
        best as f64 / n as f64
    }

    #[test]
    fn noiseless_pi0_is_one_over_k() {
        for k in 2..=4 {
            let r = pi0(&fixtures::noiseless(k)).unwrap();
            assert!((r.pi0 - 1.0 / k as f64).abs() < 1e-9);
            for v in r.p_star.iter() {
                assert!((v - 1.0 / k as f64).abs() < 1e-9);
            }
            let grid = pi0_grid_search(&fixtures::noiseless(k), 1e-3);
            assert!((r.pi0 - grid).abs() <= 2e-3);
        }
    }

    #[test]
    fn fig1_pi0_is_exactly_half() {
        for eps in [0.5, 0.1, 0.01] {
            let r = pi0(&fixtures::fig1(eps)).unwrap();
            assert_eq!(r.pi0, 0.5);
            let grid = pi0_grid_search(&fixtures::fig1(eps), 1e-3);
            assert_eq!(grid, 0.5);
        }
    }

    #[test]
    fn all_positive_channel_has_pi0_one() {
        let r = pi0(&fixtures::binary_symmetric(0.2)).unwrap();
        assert!((r.pi0 - 1.0).abs() < 1e-12);
        assert_eq!(pi0_grid_search(&fixtures::binary_symmetric(0.2), 1e-2), 1.0);
    }

    #[test]
    fn dual_certificate_matches_paper_form() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let w = fixtures::random_sparse(&mut rng, 4, 4, 0.55);
            let r = pi0(&w).unwrap();
            assert!(r.duality_gap <= 1e-9 * (1.0 + r.pi0));
            let total: f64 = r.duals.iter().sum();
            assert!(total <= 1.0 + 1e-9);
            // Dual value: min over inputs of the lambda mass on the outputs
            // reachable from that input equals pi0.
            let dual_value = (0..w.num_inputs())
                .map(|x| {
                    (0..w.num_outputs())
                        .filter(|&y| w.w(x, y) > 0.0)
                        .map(|y| r.duals[y])
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
            assert!((dual_value - r.pi0).abs() < 1e-8);
        }
    }

    #[test]
    fn ternary_grid_matches_naive_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let w = fixtures::random_sparse(&mut rng, 3, 3, 0.55);
            assert_eq!(pi0_grid_search(&w, 1.0 / 48.0), grid_naive(&w, 48));
        }
        for _ in 0..10 {
            let w = fixtures::random_sparse(&mut rng, 4, 3, 0.5);
            assert_eq!(pi0_grid_search(&w, 1.0 / 30.0), grid_naive(&w, 30));
        }
    }

    #[test]
    fn lp_matches_fine_grid_on_random_channels() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let w = fixtures::random_sparse(&mut rng, 4, 4, 0.5);
            let lp = pi0(&w).unwrap().pi0;
            let grid = pi0_grid_search(&w, 1e-3);
            assert!((lp - grid).abs() <= 2e-3, "lp {lp} vs grid {grid}");
            // The grid is a restriction of the feasible set, so it can only
            // overshoot the LP optimum.
            assert!(grid >= lp - 1e-9);
        }
    }
}
