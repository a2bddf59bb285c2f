//! Guessing-moment inequality: for any guessing function G(x, y) that ranks
//! the inputs for each observation y, the rho-th moment of the number of
//! guesses is lower-bounded by a Renyi-type sum:
//!
//!   E[G(X,Y)^rho] >= (1 + ln|X|)^(-rho) sum_y (sum_x P(x,y)^(1/(1+rho)))^(1+rho)

use crate::SolveError;

/// Outcome of one inequality evaluation.
#[derive(Debug, Clone)]
pub struct ArikanCheck {
    /// E[G(X,Y)^rho] by direct summation.
    pub lhs_moment: f64,
    /// The Renyi-sum lower bound.
    pub rhs_bound: f64,
    /// lhs >= rhs - 1e-12.
    pub holds: bool,
}

/// Validates the guessing table and evaluates both sides of the inequality.
///
/// `p_xy[x][y]` is a joint distribution (entries nonnegative, total within
/// 1e-9 of 1); `g[x][y]` must be a bijection onto {1..|X|} in x for every y.
pub fn arikan_bound_check(
    p_xy: &[Vec<f64>],
    g: &[Vec<u32>],
    rho: f64,
) -> Result<ArikanCheck, SolveError> {
    if rho <= 0.0 {
        return Err(SolveError::InvalidArgument("rho must be positive".into()));
    }
    let nx = p_xy.len();
    if nx == 0 {
        return Err(SolveError::InvalidArgument("empty joint pmf".into()));
    }
    let ny = p_xy[0].len();
    if p_xy.iter().any(|row| row.len() != ny) || g.len() != nx || g.iter().any(|r| r.len() != ny) {
        return Err(SolveError::InvalidArgument(
            "joint pmf and guessing table shapes disagree".into(),
        ));
    }
    let mut total = 0.0;
    for row in p_xy {
        for &v in row {
            if v < 0.0 || !v.is_finite() {
                return Err(SolveError::InvalidArgument(
                    "joint pmf entries must be finite and nonnegative".into(),
                ));
            }
            total += v;
        }
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(SolveError::InvalidArgument(format!(
            "joint pmf sums to {total}"
        )));
    }
    for y in 0..ny {
        let mut seen = vec![false; nx];
        for gx in g {
            let rank = gx[y];
            if rank < 1 || rank as usize > nx || seen[rank as usize - 1] {
                return Err(SolveError::InvalidArgument(format!(
                    "guessing ranks for observation {y} are not a permutation of 1..{nx}"
                )));
            }
            seen[rank as usize - 1] = true;
        }
    }
    let mut lhs = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            if p_xy[x][y] > 0.0 {
                lhs += p_xy[x][y] * (g[x][y] as f64).powf(rho);
            }
        }
    }
    let alpha = 1.0 / (1.0 + rho);
    let mut renyi_sum = 0.0;
    for y in 0..ny {
        let inner: f64 = (0..nx)
            .filter(|&x| p_xy[x][y] > 0.0)
            .map(|x| p_xy[x][y].powf(alpha))
            .sum();
        if inner > 0.0 {
            renyi_sum += inner.powf(1.0 + rho);
        }
    }
    let rhs = (1.0 + (nx as f64).ln()).powf(-rho) * renyi_sum;
    Ok(ArikanCheck {
        lhs_moment: lhs,
        rhs_bound: rhs,
        holds: lhs >= rhs - 1e-12,
    })
}

/// The moment-optimal guessing table: for each observation, inputs ranked by
/// decreasing joint probability (ties broken by input index).
pub fn likelihood_order_table(p_xy: &[Vec<f64>]) -> Vec<Vec<u32>> {
    let nx = p_xy.len();
    let ny = p_xy.first().map_or(0, Vec::len);
    let mut g = vec![vec![0u32; ny]; nx];
    for y in 0..ny {
        let mut order: Vec<usize> = (0..nx).collect();
        order.sort_by(|&a, &b| {
            p_xy[b][y]
                .partial_cmp(&p_xy[a][y])
                .unwrap()
                .then(a.cmp(&b))
        });
        for (rank, &x) in order.iter().enumerate() {
            g[x][y] = rank as u32 + 1;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_input_is_immediate() {
        let p = vec![vec![0.4, 0.6]];
        let g = vec![vec![1, 1]];
        let c = arikan_bound_check(&p, &g, 1.0).unwrap();
        assert!((c.lhs_moment - 1.0).abs() < 1e-15);
        assert!(c.holds);
    }

    #[test]
    fn uniform_two_by_two_with_likelihood_order() {
        let p = vec![vec![0.25, 0.25], vec![0.25, 0.25]];
        let g = likelihood_order_table(&p);
        let c = arikan_bound_check(&p, &g, 1.0).unwrap();
        // lhs = 1.5; rhs = (1+ln2)^{-1} * 2 * (2*0.25^{1/2})^2 = 2(1+ln2)^{-1} * 0.5... with
        // inner = 2*0.5 = 1, outer = 2, so rhs = 2/(1+ln2)^1 about 1.18.
        assert!((c.lhs_moment - 1.5).abs() < 1e-12);
        assert!(c.holds);
        assert!(c.rhs_bound < c.lhs_moment);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let p = vec![vec![0.5], vec![0.5]];
        assert!(arikan_bound_check(&p, &[vec![1], vec![1]], 1.0).is_err());
        assert!(arikan_bound_check(&p, &[vec![1], vec![3]], 1.0).is_err());
        let bad_sum = vec![vec![0.5], vec![0.6]];
        assert!(arikan_bound_check(&bad_sum, &[vec![1], vec![2]], 1.0).is_err());
    }

    #[test]
    fn holds_for_random_joints_and_random_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for trial in 0..1000 {
            let nx = 3;
            let ny = 3;
            let mut p: Vec<Vec<f64>> = (0..nx)
                .map(|_| (0..ny).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let total: f64 = p.iter().flatten().sum();
            p.iter_mut()
                .for_each(|row| row.iter_mut().for_each(|v| *v /= total));
            let mut g = vec![vec![0u32; ny]; nx];
            for y in 0..ny {
                let mut ranks: Vec<u32> = (1..=nx as u32).collect();
                // Fisher-Yates with the trial rng.
                for i in (1..ranks.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    ranks.swap(i, j);
                }
                for x in 0..nx {
                    g[x][y] = ranks[x];
                }
            }
            let c = arikan_bound_check(&p, &g, 2.0).unwrap();
            assert!(c.holds, "violated on trial {trial}: {c:?}");
        }
    }

    #[test]
    fn likelihood_order_is_the_best_of_random_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = vec![vec![0.5, 0.05], vec![0.05, 0.2], vec![0.1, 0.1]];
        let g_opt = likelihood_order_table(&p);
        let opt = arikan_bound_check(&p, &g_opt, 1.5).unwrap().lhs_moment;
        for _ in 0..100 {
            let mut g = vec![vec![0u32; 2]; 3];
            for y in 0..2 {
                let mut ranks: Vec<u32> = vec![1, 2, 3];
                for i in (1..3).rev() {
                    let j = rng.gen_range(0..=i);
                    ranks.swap(i, j);
                }
                for x in 0..3 {
                    g[x][y] = ranks[x];
                }
            }
            let other = arikan_bound_check(&p, &g, 1.5).unwrap().lhs_moment;
            assert!(opt <= other + 1e-12);
        }
    }
}
