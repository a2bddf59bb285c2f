//! Zero-pattern quantities: the pairwise reach probability `q*`, the
//! positivity predicates for zero-error and list-size capacities, and the
//! ambiguous-output upper bound on the feedback list capacity.
//!
//! Everything here is combinatorial in the structural-zero pattern; no
//! thresholding of small probabilities ever happens.

use super::dmc::Dmc;

/// Maximizer data for `q*`.
#[derive(Debug, Clone)]
pub struct QStarWitness {
    /// The value `q* = W(Z(x0) | x1)`.
    pub q_star: f64,
    /// Input whose zero set is targeted.
    pub x0: usize,
    /// Input that sends the channel into that zero set.
    pub x1: usize,
    /// The zero set `Z(x0)` (all outputs impossible under x0).
    pub y0: Vec<usize>,
}

/// Maximizes `W(Z(x0)|x1)` over ordered pairs of distinct inputs, where
/// `Z(x0)` is the zero set of x0. Using the full zero set is optimal because
/// enlarging the target set only increases its probability. Returns the
/// first maximizing pair in lexicographic (x0, x1) order.
///
/// The value is exactly 1.0 whenever the supports of x1 and x0 are disjoint
/// (the sum is skipped so no rounding can occur), and q* = 1 iff two inputs
/// have disjoint supports.
pub fn q_star(w: &Dmc) -> QStarWitness {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let mut best = QStarWitness {
        q_star: 0.0,
        x0: 0,
        x1: if nx > 1 { 1 } else { 0 },
        y0: (0..ny).filter(|&y| w.w(0, y) == 0.0).collect(),
    };
    for x0 in 0..nx {
        let zero_set: Vec<usize> = (0..ny).filter(|&y| w.w(x0, y) == 0.0).collect();
        if zero_set.is_empty() {
            continue;
        }
        for x1 in 0..nx {
            if x1 == x0 {
                continue;
            }
            let disjoint_supports = (0..ny).all(|y| w.w(x1, y) == 0.0 || w.w(x0, y) == 0.0);
            let q = if disjoint_supports {
                1.0
            } else {
                let s: f64 = zero_set.iter().map(|&y| w.w(x1, y)).sum();
                s.min(1.0)
            };
            if q > best.q_star {
                best = QStarWitness {
                    q_star: q,
                    x0,
                    x1,
                    y0: zero_set.clone(),
                };
            }
        }
    }
    best
}

/// True iff two inputs have disjoint supports (positive zero-error
/// capacity). Purely structural; no float comparisons beyond exact zero.
pub fn czero_positive(w: &Dmc) -> bool {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    for a in 0..nx {
        for b in (a + 1)..nx {
            if (0..ny).all(|y| w.w(a, y) == 0.0 || w.w(b, y) == 0.0) {
                return true;
            }
        }
    }
    false
}

/// True iff there exist inputs x, x' and an output y with
/// `W(y|x) > 0 = W(y|x')`. This single predicate characterizes positivity of
/// the list-size and erasure capacities, with and without feedback, and is
/// equivalent to `q* > 0`.
pub fn cal_positive(w: &Dmc) -> bool {
    let nx = w.num_inputs();
    (0..w.num_outputs()).any(|y| {
        let s = w.output_support(y).len();
        s >= 1 && s < nx
    })
}

/// Upper bound on the feedback list capacity from fully ambiguous outputs.
///
/// Let `Y_amb = {y : X(y) = X}` and `q_amb = min_x W(Y_amb | x)`. A received
/// block inside `Y_amb` rules out no message, so the list has full size with
/// probability at least `q_amb^n` and the rho-th moment forces the rate below
/// `-log(q_amb)/rho`. Returns +inf when `q_amb = 0` (vacuous bound).
pub fn ambiguous_output_upper_bound(w: &Dmc, rho: f64) -> f64 {
    assert!(rho > 0.0, "rho must be positive");
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let ambiguous: Vec<usize> = (0..ny)
        .filter(|&y| w.output_support(y).len() == nx)
        .collect();
    if ambiguous.is_empty() {
        return f64::INFINITY;
    }
    let q_amb = if ambiguous.len() == ny {
        1.0
    } else {
        (0..nx)
            .map(|x| ambiguous.iter().map(|&y| w.w(x, y)).sum::<f64>().min(1.0))
            .fold(f64::INFINITY, f64::min)
    };
    if q_amb == 0.0 {
        f64::INFINITY
    } else {
        -q_amb.ln() / rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    #[test]
    fn fig1_reaches_q_star_one_exactly() {
        let w = fixtures::fig1(0.1);
        let witness = q_star(&w);
        assert_eq!(witness.q_star, 1.0);
        assert!(czero_positive(&w));
        // Lexicographically first maximizing pair: x0=0 has zero set {2}
        // and input 2 lands there with probability one.
        assert_eq!((witness.x0, witness.x1), (0, 2));
        assert_eq!(witness.y0, vec![2]);
    }

    #[test]
    fn fig2_q_star_equals_delta_exactly() {
        let delta = 0.05;
        let w = fixtures::fig2(0.01, delta);
        let witness = q_star(&w);
        assert_eq!(witness.q_star, delta);
        assert_eq!(witness.y0, vec![2]);
        assert_eq!(witness.x1, 2);
        assert!(!czero_positive(&w));
        assert!(cal_positive(&w));
    }

    #[test]
    fn strictly_positive_channels_have_zero_q_star() {
        let w = fixtures::binary_symmetric(0.1);
        assert_eq!(q_star(&w).q_star, 0.0);
        assert!(!cal_positive(&w));
        assert!(!czero_positive(&w));
    }

    #[test]
    fn q_star_positive_iff_cal_positive() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let w = fixtures::random_sparse(&mut rng, 3, 4, 0.5);
            assert_eq!(q_star(&w).q_star > 0.0, cal_positive(&w));
        }
    }

    #[test]
    fn q_star_one_iff_disjoint_supports() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..60 {
            let w = fixtures::random_sparse(&mut rng, 4, 3, 0.45);
            assert_eq!(q_star(&w).q_star == 1.0, czero_positive(&w));
        }
    }

    #[test]
    fn ambiguous_bound_on_fig2_is_minus_log_one_minus_delta() {
        let (eps, delta, rho) = (0.01, 0.05, 1.0);
        let w = fixtures::fig2(eps, delta);
        let bound = ambiguous_output_upper_bound(&w, rho);
        // Exact equality: the minimizing row is input 2, whose two halves
        // add back to exactly 1 - delta in IEEE arithmetic.
        assert_eq!(bound, -(1.0 - delta).ln() / rho);
    }

    #[test]
    fn ambiguous_bound_edge_cases() {
        // No fully ambiguous output: vacuous bound.
        assert_eq!(
            ambiguous_output_upper_bound(&fixtures::noiseless(2), 1.0),
            f64::INFINITY
        );
        // Every output ambiguous: the capacity is pinned to zero.
        assert_eq!(
            ambiguous_output_upper_bound(&fixtures::binary_symmetric(0.2), 1.0),
            0.0
        );
    }

    #[test]
    fn eps_noise3_q_star() {
        let eps = 0.001;
        let w = fixtures::eps_noise3(eps);
        let witness = q_star(&w);
        // Z(0) = {1} and input 1 hits output 1 with probability 1 - eps.
        assert_eq!(witness.q_star, 1.0 - eps);
        assert_eq!((witness.x0, witness.x1), (0, 1));
    }
}
