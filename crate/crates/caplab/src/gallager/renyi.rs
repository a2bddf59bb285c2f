//! Renyi entropies of order alpha = 1/(1+rho) and the entropy-difference
//! view of the cutoff-style rate.
//!
//! With H_a(X) the Renyi entropy and H_a(X|Y) the Arimoto conditional
//! version, the difference H_a(X) - H_a(X|Y) maximized over the input
//! distribution equals max_P E0(rho, P)/rho. The equality holds at the level
//! of maxima only; pointwise the two sides generally differ.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{Dmc, Pmf};
use crate::numeric::{project_to_simplex, random_simplex_point};

/// Renyi quantities at a fixed input distribution.
#[derive(Debug, Clone)]
pub struct RenyiReport {
    pub rho: f64,
    /// alpha = 1/(1+rho).
    pub alpha: f64,
    /// H_alpha(X) in nats.
    pub h_renyi_x: f64,
    /// Arimoto conditional entropy H_alpha(X|Y) in nats.
    pub h_renyi_x_given_y: f64,
    /// h_renyi_x - h_renyi_x_given_y.
    pub difference: f64,
}

/// Evaluates the order-1/(1+rho) Renyi entropy pair for input `p` over `w`.
pub fn renyi_report(rho: f64, p: &Pmf, w: &Dmc) -> RenyiReport {
    assert!(rho > 0.0, "rho must be positive");
    assert_eq!(p.len(), w.num_inputs(), "pmf length mismatch");
    let alpha = 1.0 / (1.0 + rho);
    let sum_pa: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
    let h_x = (1.0 + rho) / rho * sum_pa.ln();
    // H_alpha(X|Y) = (1/rho) log sum_y (sum_x P(x,y)^alpha)^(1+rho).
    let mut outer = 0.0;
    for y in 0..w.num_outputs() {
        let mut inner = 0.0;
        for (x, &px) in p.iter().enumerate() {
            let joint = px * w.w(x, y);
            if joint > 0.0 {
                inner += joint.powf(alpha);
            }
        }
        if inner > 0.0 {
            outer += inner.powf(1.0 + rho);
        }
    }
    let h_xy = outer.ln() / rho;
    RenyiReport {
        rho,
        alpha,
        h_renyi_x: h_x,
        h_renyi_x_given_y: h_xy,
        difference: h_x - h_xy,
    }
}

/// Maximizes the Renyi entropy difference over input distributions by
/// multistart projected gradient ascent with numeric gradients. Used to
/// cross-check the identity with max_P E0/rho; the tolerance of the check
/// lives with the caller.
pub fn maximize_renyi_difference(rho: f64, w: &Dmc, restarts: usize, seed: u64) -> (f64, Pmf) {
    assert!(rho > 0.0);
    let nx = w.num_inputs();
    let objective = |p: &[f64]| -> f64 {
        match Pmf::new(p.to_vec()) {
            Ok(pmf) => renyi_report(rho, &pmf, w).difference,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![1.0 / nx as f64; nx]];
    for _ in 0..restarts {
        starts.push(random_simplex_point(&mut rng, nx));
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_p = vec![1.0 / nx as f64; nx];
    for start in starts {
        let mut p = start;
        let mut value = objective(&p);
        for _ in 0..400 {
            // Central-difference gradient on the simplex embedding.
            let h = 1e-7;
            let mut grad = vec![0.0; nx];
            for i in 0..nx {
                let mut up = p.clone();
                let mut dn = p.clone();
                up[i] += h;
                dn[i] = (dn[i] - h).max(0.0);
                let su: f64 = up.iter().sum();
                let sd: f64 = dn.iter().sum();
                up.iter_mut().for_each(|v| *v /= su);
                dn.iter_mut().for_each(|v| *v /= sd);
                grad[i] = (objective(&up) - objective(&dn)) / (2.0 * h);
            }
            let mut improved = false;
            let mut eta = 0.5;
            for _ in 0..30 {
                let mut cand: Vec<f64> = p.iter().zip(&grad).map(|(&pi, &g)| pi + eta * g).collect();
                project_to_simplex(&mut cand);
                let v = objective(&cand);
                if v > value + 1e-14 {
                    p = cand;
                    value = v;
                    improved = true;
                    break;
                }
                eta *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if value > best_value {
            best_value = value;
            best_p = p;
        }
    }
    (best_value, Pmf::new(best_p).expect("projected point is a pmf"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;
    use crate::gallager::maximize_e0;

    #[test]
    fn uniform_input_has_full_renyi_entropy() {
        let w = fixtures::binary_symmetric(0.1);
        for rho in [0.5, 1.0, 3.0] {
            let r = renyi_report(rho, &Pmf::uniform(2), &w);
            assert!((r.h_renyi_x - std::f64::consts::LN_2).abs() < 1e-12);
            assert!((r.alpha - 1.0 / (1.0 + rho)).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_channel_reveals_the_input() {
        let w = fixtures::noiseless(3);
        let p = Pmf::new(vec![0.5, 0.3, 0.2]).unwrap();
        for rho in [0.5, 2.0] {
            let r = renyi_report(rho, &p, &w);
            assert!(r.h_renyi_x_given_y.abs() < 1e-12);
            assert!((r.difference - r.h_renyi_x).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_maximum_matches_cutoff_on_bsc() {
        let w = fixtures::binary_symmetric(0.1);
        let rho = 1.0;
        let cutoff = maximize_e0(rho, &w, 1e-10, 100_000).unwrap().cutoff_rate;
        let (diff_max, _) = maximize_renyi_difference(rho, &w, 4, 9);
        assert!(
            (cutoff - diff_max).abs() < 1e-6,
            "cutoff {cutoff} vs difference max {diff_max}"
        );
    }

    #[test]
    fn pointwise_difference_is_a_lower_bound_through_the_substitution() {
        // The change of variables u(x) proportional to p(x)^(1/(1+rho))
        // turns the difference at p into E0(rho, u)/rho; spot-check the
        // identity numerically at a non-uniform p.
        let w = fixtures::fig2(0.05, 0.2);
        let rho = 1.3;
        let p = Pmf::new(vec![0.5, 0.25, 0.25]).unwrap();
        let r = renyi_report(rho, &p, &w);
        let alpha = 1.0 / (1.0 + rho);
        let mut u: Vec<f64> = p.iter().map(|&x| x.powf(alpha)).collect();
        let s: f64 = u.iter().sum();
        u.iter_mut().for_each(|v| *v /= s);
        let e0v = crate::gallager::e0(rho, &Pmf::new(u).unwrap(), &w);
        assert!(
            (r.difference - e0v / rho).abs() < 1e-12,
            "difference {} vs substituted E0/rho {}",
            r.difference,
            e0v / rho
        );
    }
}
