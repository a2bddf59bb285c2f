//! Shannon capacity by Blahut-Arimoto alternating maximization with a
//! duality-gap stopping certificate.

use crate::channel::{Dmc, Pmf};
use crate::SolveError;

/// Capacity estimate with its certificate.
///
/// `capacity` is the mutual information achieved by `p_star`; the true
/// capacity exceeds it by at most `gap`.
#[derive(Clone, Debug)]
pub struct ShannonCapacity {
    pub capacity: f64,
    pub p_star: Pmf,
    pub gap: f64,
    pub iterations: u64,
}

/// Runs the alternating maximization without failing on a slow instance;
/// callers that need the error contract wrap this.
pub(crate) fn ba_capacity(w: &Dmc, tol: f64, max_iter: u64) -> ShannonCapacity {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut d = vec![0.0; nx];
    let mut q = vec![0.0; ny];
    let mut best_lb = 0.0;
    let mut best_p = p.clone();
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    for iter in 1..=max_iter {
        iterations = iter;
        for (y, qv) in q.iter_mut().enumerate() {
            *qv = (0..nx).map(|x| p[x] * w.w(x, y)).sum();
        }
        let mut lb = 0.0;
        let mut ub = f64::NEG_INFINITY;
        for (x, dx) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for y in 0..ny {
                let wv = w.w(x, y);
                if wv > 0.0 {
                    acc += wv * (wv / q[y]).ln();
                }
            }
            *dx = acc;
            lb += p[x] * acc;
            ub = ub.max(acc);
        }
        if lb > best_lb {
            best_lb = lb;
            best_p.copy_from_slice(&p);
        }
        gap = ub - lb;
        if gap <= tol {
            best_lb = lb;
            best_p.copy_from_slice(&p);
            break;
        }
        // Multiplicative update keeps every input weight positive, so the
        // output distribution never loses a reachable output.
        let mut z = 0.0;
        for (px, dx) in p.iter_mut().zip(&d) {
            *px *= dx.exp();
            z += *px;
        }
        for px in p.iter_mut() {
            *px /= z;
        }
    }
    let total: f64 = best_p.iter().sum();
    for v in best_p.iter_mut() {
        *v /= total;
    }
    ShannonCapacity {
        capacity: best_lb.max(0.0),
        p_star: Pmf::new(best_p).expect("normalized input distribution"),
        gap,
        iterations,
    }
}

/// Computes the channel capacity in nats together with an achieving input
/// distribution, stopping once `max_x D(W(.|x) || P*W) - I(P*, W) <= tol`.
pub fn shannon_capacity(
    w: &Dmc,
    tol: f64,
    max_iter: u64,
) -> Result<ShannonCapacity, SolveError> {
    let result = ba_capacity(w, tol, max_iter);
    if result.gap > tol {
        return Err(SolveError::NonConvergence {
            residual: result.gap,
            tol,
            iterations: result.iterations,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    fn binary_entropy(p: f64) -> f64 {
        if p == 0.0 || p == 1.0 {
            return 0.0;
        }
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    }

    #[test]
    fn bsc_capacity_matches_closed_form() {
        let w = fixtures::binary_symmetric(0.1);
        let r = shannon_capacity(&w, 1e-10, 1_000_000).unwrap();
        let expected = std::f64::consts::LN_2 - binary_entropy(0.1);
        assert!((r.capacity - expected).abs() < 1e-9);
        assert!((r.p_star[0] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn noiseless_capacity_is_log_k() {
        for k in 2..=5 {
            let w = fixtures::noiseless(k);
            let r = shannon_capacity(&w, 1e-10, 100_000).unwrap();
            assert!((r.capacity - (k as f64).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn single_output_channel_has_zero_capacity() {
        let w = Dmc::from_rows(vec![vec![1.0], vec![1.0]]).unwrap();
        let r = shannon_capacity(&w, 1e-10, 10).unwrap();
        assert_eq!(r.capacity, 0.0);
        assert!(r.gap <= 1e-10);
    }

    #[test]
    fn erasure_capacity_matches_closed_form() {
        for delta in [0.2, 0.5, 0.8] {
            let w = fixtures::binary_erasure(delta);
            let r = shannon_capacity(&w, 1e-10, 1_000_000).unwrap();
            let expected = (1.0 - delta) * std::f64::consts::LN_2;
            assert!((r.capacity - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn unreachable_tolerance_reports_nonconvergence() {
        // Asymmetric channel, so the upper and lower capacity estimates
        // never coincide exactly and a zero tolerance cannot be met.
        let w = fixtures::z_channel(0.3);
        let err = shannon_capacity(&w, 0.0, 25).unwrap_err();
        match err {
            SolveError::NonConvergence { residual, .. } => {
                assert!(residual > 0.0)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn capacity_dominates_mutual_information_at_random_inputs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let w = fixtures::random_dense(&mut rng, 3, 4, 0.01);
            let r = shannon_capacity(&w, 1e-9, 500_000).unwrap();
            for _ in 0..5 {
                let p = Pmf::new(crate::numeric::random_simplex_point(
                    &mut rng, 3,
                ))
                .unwrap();
                let mi = crate::channel::mutual_information(&p, w.rows());
                assert!(mi <= r.capacity + 1e-9 + r.gap);
            }
        }
    }
}
