//! Dense two-phase primal simplex for the small linear programs used by the
//! capacity computations. Problems are minimizations over nonnegative
//! variables with `<=` and `==` rows; every right-hand side must be
//! nonnegative, which the callers in this crate satisfy by construction.

/// Row sense of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Le,
    Eq,
}

/// One constraint row `coeffs . x (<=|==) rhs`.
#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub sense: Constraint,
    pub rhs: f64,
}

/// Minimize `objective . x` subject to the rows, with `x >= 0`.
#[derive(Clone, Debug)]
pub struct Lp {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

/// Optimal primal point with the dual vector read off the final tableau.
///
/// `duals[i]` is the multiplier of row `i`; for a minimization it is
/// nonpositive on `<=` rows and free on `==` rows. `gap` is the verified
/// strong-duality residual `|c.x - b.y|`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub duals: Vec<f64>,
    pub gap: f64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible (phase-1 objective {0:.3e})")]
    Infeasible(f64),
    #[error("linear program is unbounded below")]
    Unbounded,
    #[error("right-hand side of row {row} is negative ({rhs})")]
    NegativeRhs { row: usize, rhs: f64 },
    #[error("row {row} has {got} coefficients, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("duality certificate failed (gap {0:.3e})")]
    Certificate(f64),
}

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const CERT_TOL: f64 = 1e-9;

struct Tableau {
    /// Constraint rows, each of length `ncols + 1` with the rhs last.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row of length `ncols + 1`; the last entry is the
    /// negated objective value of the current basis.
    cost: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex with Bland's rule until optimality or
    /// unboundedness. Columns in `banned` never enter the basis.
    fn solve(&mut self, banned: &[bool]) -> Result<(), LpError> {
        let m = self.rows.len();
        let max_pivots = 10_000 * (m + self.ncols);
        for _ in 0..max_pivots {
            let Some(enter) = (0..self.ncols)
                .find(|&j| !banned[j] && self.cost[j] < -COST_EPS)
            else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][self.ncols] / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - PIVOT_EPS
                                || (ratio < lr + PIVOT_EPS
                                    && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Err(LpError::Unbounded),
            }
        }
        Err(LpError::Certificate(f64::INFINITY))
    }
}

/// Solves the linear program by the two-phase dense simplex method.
pub fn solve_lp(lp: &Lp) -> Result<LpSolution, LpError> {
    let n = lp.objective.len();
    let m = lp.rows.len();
    for (i, row) in lp.rows.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(LpError::Ragged {
                row: i,
                got: row.coeffs.len(),
                expected: n,
            });
        }
        if row.rhs < 0.0 {
            return Err(LpError::NegativeRhs {
                row: i,
                rhs: row.rhs,
            });
        }
    }

    let n_slack = lp.rows.iter().filter(|r| r.sense == Constraint::Le).count();
    let n_art = m - n_slack;
    let ncols = n + n_slack + n_art;
    // Column layout: structural, then one slack per Le row, then one
    // artificial per Eq row, both in row order.
    let mut slack_col = vec![usize::MAX; m];
    let mut art_col = vec![usize::MAX; m];
    {
        let (mut s, mut a) = (n, n + n_slack);
        for (i, row) in lp.rows.iter().enumerate() {
            match row.sense {
                Constraint::Le => {
                    slack_col[i] = s;
                    s += 1;
                }
                Constraint::Eq => {
                    art_col[i] = a;
                    a += 1;
                }
            }
        }
    }

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![0.0; ncols + 1],
        basis: vec![0; m],
        ncols,
    };
    for (i, row) in lp.rows.iter().enumerate() {
        let mut r = vec![0.0; ncols + 1];
        r[..n].copy_from_slice(&row.coeffs);
        r[ncols] = row.rhs;
        let b = if row.sense == Constraint::Le {
            r[slack_col[i]] = 1.0;
            slack_col[i]
        } else {
            r[art_col[i]] = 1.0;
            art_col[i]
        };
        tab.basis[i] = b;
        tab.rows.push(r);
    }

    let no_ban = vec![false; ncols];
    if n_art > 0 {
        // Phase 1: minimize the sum of artificials starting from the
        // all-slack-and-artificial basis.
        for i in 0..m {
            if art_col[i] != usize::MAX {
                tab.cost[art_col[i]] = 1.0;
            }
        }
        for i in 0..m {
            if art_col[i] != usize::MAX {
                let row = tab.rows[i].clone();
                for (v, p) in tab.cost.iter_mut().zip(&row) {
                    *v -= *p;
                }
            }
        }
        tab.solve(&no_ban)?;
        let phase1 = -tab.cost[ncols];
        if phase1 > 1e-8 {
            return Err(LpError::Infeasible(phase1));
        }
    }

    // Phase 2 with the original objective; artificial columns may stay
    // basic at value zero but never re-enter.
    let mut banned = vec![false; ncols];
    for i in 0..m {
        if art_col[i] != usize::MAX {
            banned[art_col[i]] = true;
        }
    }
    tab.cost = vec![0.0; ncols + 1];
    tab.cost[..n].copy_from_slice(&lp.objective);
    for i in 0..m {
        let c = tab.cost[tab.basis[i]];
        if c != 0.0 {
            let row = tab.rows[i].clone();
            for (v, p) in tab.cost.iter_mut().zip(&row) {
                *v -= c * *p;
            }
        }
    }
    tab.solve(&banned)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rows[i][ncols].max(0.0);
        }
    }
    let value: f64 = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, xi)| c * xi)
        .sum();

    // Slack and artificial columns carry the identity with cost zero, so
    // the dual of row i is the negated reduced cost of its unit column.
    let mut duals = vec![0.0; m];
    for i in 0..m {
        let col = if slack_col[i] != usize::MAX {
            slack_col[i]
        } else {
            art_col[i]
        };
        duals[i] = -tab.cost[col];
    }
    let dual_value: f64 = lp.rows.iter().zip(&duals).map(|(r, y)| r.rhs * y).sum();
    let gap = (value - dual_value).abs();
    let scale = 1.0 + value.abs();
    if gap > CERT_TOL * scale {
        return Err(LpError::Certificate(gap));
    }
    for (row, y) in lp.rows.iter().zip(&duals) {
        if row.sense == Constraint::Le && *y > CERT_TOL {
            return Err(LpError::Certificate(*y));
        }
    }
    for j in 0..n {
        let col_dot: f64 = lp
            .rows
            .iter()
            .zip(&duals)
            .map(|(r, y)| r.coeffs[j] * y)
            .sum();
        if col_dot > lp.objective[j] + CERT_TOL * scale {
            return Err(LpError::Certificate(col_dot - lp.objective[j]));
        }
    }

    Ok(LpSolution {
        x,
        value,
        duals,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(coeffs: &[f64], rhs: f64) -> LpRow {
        LpRow {
            coeffs: coeffs.to_vec(),
            sense: Constraint::Le,
            rhs,
        }
    }

    fn eq(coeffs: &[f64], rhs: f64) -> LpRow {
        LpRow {
            coeffs: coeffs.to_vec(),
            sense: Constraint::Eq,
            rhs,
        }
    }

    #[test]
    fn two_variable_optimum_and_duals() {
        let lp = Lp {
            objective: vec![-1.0, -1.0],
            rows: vec![le(&[1.0, 2.0], 4.0), le(&[3.0, 1.0], 6.0)],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value + 14.0 / 5.0).abs() < 1e-9);
        assert!((sol.x[0] - 8.0 / 5.0).abs() < 1e-9);
        assert!((sol.x[1] - 6.0 / 5.0).abs() < 1e-9);
        assert!((sol.duals[0] + 2.0 / 5.0).abs() < 1e-9);
        assert!((sol.duals[1] + 1.0 / 5.0).abs() < 1e-9);
        assert!(sol.gap < 1e-9);
    }

    #[test]
    fn equality_row_dual() {
        let lp = Lp {
            objective: vec![1.0, 2.0],
            rows: vec![eq(&[1.0, 1.0], 1.0)],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 1.0).abs() < 1e-12);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert!((sol.duals[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_system_is_reported() {
        let lp = Lp {
            objective: vec![0.0],
            rows: vec![le(&[1.0], 1.0), eq(&[1.0], 2.0)],
        };
        assert!(matches!(solve_lp(&lp), Err(LpError::Infeasible(_))));
    }

    #[test]
    fn unbounded_objective_is_reported() {
        let lp = Lp {
            objective: vec![-1.0, 0.0],
            rows: vec![le(&[0.0, 1.0], 1.0)],
        };
        assert!(matches!(solve_lp(&lp), Err(LpError::Unbounded)));
    }

    #[test]
    fn negative_rhs_is_rejected() {
        let lp = Lp {
            objective: vec![1.0],
            rows: vec![le(&[1.0], -1.0)],
        };
        assert!(matches!(
            solve_lp(&lp),
            Err(LpError::NegativeRhs { row: 0, .. })
        ));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example; Bland's rule must reach the optimum.
        let lp = Lp {
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            rows: vec![
                le(&[0.25, -60.0, -0.04, 9.0], 0.0),
                le(&[0.5, -90.0, -0.02, 3.0], 0.0),
                le(&[0.0, 0.0, 1.0, 0.0], 1.0),
            ],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value + 0.05).abs() < 1e-9);
    }

    #[test]
    fn random_problems_certify_strong_duality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(2..5);
            let m = rng.gen_range(1..4);
            let objective: Vec<f64> =
                (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let mut rows: Vec<LpRow> = (0..m)
                .map(|_| {
                    let coeffs: Vec<f64> =
                        (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
                    // Coefficients stay below 2, so these rows keep the
                    // whole probability simplex feasible.
                    le(&coeffs, rng.gen_range(2.0..3.0))
                })
                .collect();
            rows.push(eq(&vec![1.0; n], 1.0));
            let sol = solve_lp(&Lp { objective, rows });
            // A positive objective over the standard simplex is always
            // feasible and bounded.
            let sol = sol.unwrap();
            assert!(sol.gap <= 1e-9 * (1.0 + sol.value.abs()));
            let total: f64 = sol.x.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}
