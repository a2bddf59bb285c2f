//! Gallager's E0 function and its maximization over input distributions.
//!
//! E0(rho, P) = -log sum_y alpha_y^(1+rho) with
//! alpha_y = sum_x P(x) W(y|x)^(1/(1+rho)), so maximizing E0 is minimizing
//! the convex functional F(P) = sum_y alpha_y^(1+rho) over the simplex.
//!
//! Optimality is characterized by the per-input weighted sums
//! s(x) = sum_y W(y|x)^(1/(1+rho)) alpha_y^rho: P is optimal iff
//! s(x) >= F for every x with equality on the support of P, and
//! sum_x P(x) s(x) = F identically. The reported certificate is the
//! relative residual max(max_x (1 - s(x)/F), max_{P(x)>0} |1 - s(x)/F|);
//! the absolute version degenerates at large rho where F itself is
//! astronomically small. A residual r bounds the value gap:
//! E0* - E0(P) <= -log(1 - (1+rho) r) by convexity of F.
//!
//! The optimizer is a multiplicative majorize-minimize update
//! P'(x) proportional to P(x) s(x)^(-t/rho) with step exponent t. At t = 1
//! the update provably never increases F: applying Jensen's inequality with
//! the mixture weights P(x) a(x,y)/alpha_y gives the separable majorizer
//! F(P') <= sum_x P'(x)^(1+rho) P(x)^(-rho) s(x), whose simplex minimizer is
//! exactly the update above. Steps are accepted only when F decreases, with
//! t adapted upward on success for acceleration and cut back on failure.
//! A projected-gradient pass with Armijo backtracking plus eight random
//! restarts serves as fallback when the multiplicative path stalls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{Dmc, Pmf};
use crate::numeric::{project_to_simplex, random_simplex_point};
use crate::SolveError;

/// Mass below which an input is clipped to exactly zero during iteration.
/// Multiplicative updates only reach the boundary asymptotically; clipping
/// makes boundary optima attainable and is safe because a wrong clip keeps
/// the final certificate large, which triggers the fallback path.
const CLIP_EPS: f64 = 1e-15;

/// Mass below which an input does not count as support in the residual.
const SUPPORT_EPS: f64 = 1e-12;

/// Stalled-iteration threshold before switching to projected gradient.
const STALL_LIMIT: u32 = 20;

const FALLBACK_RESTARTS: usize = 8;

/// Fixed seed for the fallback restarts; the optimizer is deterministic.
const RESTART_SEED: u64 = 0x0E0_0E0;

/// Certified maximization result for E0 at a fixed rho.
#[derive(Debug, Clone)]
pub struct E0Result {
    pub rho: f64,
    /// The maximizing input distribution (up to the certificate).
    pub p_star: Pmf,
    /// E0(rho, p_star) in nats.
    pub e0_value: f64,
    /// e0_value / rho.
    pub cutoff_rate: f64,
    /// Relative optimality-condition residual at p_star; values at or below
    /// the requested tolerance certify global optimality of e0_value to
    /// within (1+rho) times the residual.
    pub kkt_residual: f64,
    /// Total iterations spent across all starts.
    pub iterations: u64,
}

/// Per-channel tables for a fixed rho: a(x, y) = W(y|x)^(1/(1+rho)) and its
/// logarithm.
struct E0Workspace {
    nx: usize,
    ny: usize,
    rho: f64,
    a: Vec<Vec<f64>>,
    log_a: Vec<Vec<f64>>,
}

/// State evaluated at one input distribution.
struct Evaluation {
    log_f: f64,
    /// s(x)/F per input; entries for off-support inputs are still exact.
    ratio: Vec<f64>,
    /// log(s(x)/F) per input; finite for every input whose row overlaps
    /// the current output support, even when the linear ratio underflows.
    log_ratio: Vec<f64>,
    residual: f64,
}

impl E0Workspace {
    fn new(rho: f64, w: &Dmc) -> Self {
        let nx = w.num_inputs();
        let ny = w.num_outputs();
        let inv = 1.0 / (1.0 + rho);
        let a: Vec<Vec<f64>> = (0..nx)
            .map(|x| (0..ny).map(|y| w.w(x, y).powf(inv)).collect())
            .collect();
        let log_a = a
            .iter()
            .map(|row| row.iter().map(|&v| v.ln()).collect())
            .collect();
        Self {
            nx,
            ny,
            rho,
            a,
            log_a,
        }
    }

    fn evaluate(&self, p: &[f64]) -> Evaluation {
        let rho = self.rho;
        let mut alpha = vec![0.0; self.ny];
        for x in 0..self.nx {
            let px = p[x];
            if px == 0.0 {
                continue;
            }
            for (y, alpha_y) in alpha.iter_mut().enumerate() {
                *alpha_y += px * self.a[x][y];
            }
        }
        // alpha_y <= 1 always and max_y alpha_y >= 1/ny because the
        // alpha sum over y is at least 1, so the scaling below cannot
        // overflow or collapse.
        let m = alpha.iter().copied().fold(0.0_f64, f64::max);
        debug_assert!(m > 0.0);
        // z_y = alpha_y / m in [0, 1].
        let z: Vec<f64> = alpha.iter().map(|&a| a / m).collect();
        let log_z: Vec<f64> = z.iter().map(|&z| z.ln()).collect();
        let d: f64 = z.iter().map(|&z| z.powf(1.0 + rho)).sum();
        let log_f = (1.0 + rho) * m.ln() + d.ln();
        // s(x)/F through logs: at large rho the terms z_y^rho underflow
        // linearly, yet log(s(x)/F) stays finite whenever the row touches
        // an output with alpha_y > 0, which holds for every P(x) > 0.
        let log_md = m.ln() + d.ln();
        let mut ratio = vec![0.0; self.nx];
        let mut log_ratio = vec![f64::NEG_INFINITY; self.nx];
        let mut terms = vec![0.0_f64; self.ny];
        for x in 0..self.nx {
            let mut peak = f64::NEG_INFINITY;
            let mut count = 0;
            for y in 0..self.ny {
                if self.a[x][y] > 0.0 && z[y] > 0.0 {
                    let t = self.log_a[x][y] + rho * log_z[y];
                    terms[count] = t;
                    count += 1;
                    peak = peak.max(t);
                }
            }
            if count > 0 {
                let sum: f64 = terms[..count].iter().map(|&t| (t - peak).exp()).sum();
                log_ratio[x] = peak + sum.ln() - log_md;
                ratio[x] = log_ratio[x].exp();
            }
        }
        let mut residual = 0.0_f64;
        for x in 0..self.nx {
            let slack = 1.0 - ratio[x];
            residual = residual.max(slack);
            if p[x] > SUPPORT_EPS {
                residual = residual.max(slack.abs());
            }
        }
        Evaluation {
            log_f,
            ratio,
            log_ratio,
            residual,
        }
    }
}

/// E0(rho, p) in nats for rho >= 0; exactly 0 at rho = 0.
pub fn e0(rho: f64, p: &Pmf, w: &Dmc) -> f64 {
    assert!(rho >= 0.0, "rho must be nonnegative");
    assert_eq!(p.len(), w.num_inputs(), "pmf length mismatch");
    if rho == 0.0 {
        return 0.0;
    }
    let ws = E0Workspace::new(rho, w);
    -ws.evaluate(p).log_f
}

/// Relative optimality residual and per-input relative slacks `1 - s(x)/F`
/// at the distribution `p`. A residual near zero certifies that `p`
/// maximizes E0(rho, .).
pub fn kkt_residual(rho: f64, p: &Pmf, w: &Dmc) -> (f64, Vec<f64>) {
    assert!(rho > 0.0, "rho must be positive");
    assert_eq!(p.len(), w.num_inputs(), "pmf length mismatch");
    let ws = E0Workspace::new(rho, w);
    let eval = ws.evaluate(p);
    let slacks = eval.ratio.iter().map(|&r| 1.0 - r).collect();
    (eval.residual, slacks)
}

/// Renormalizes in place, clipping near-zero entries to exact zero. The
/// clip test is written so non-finite entries are also zeroed.
fn clip_and_normalize(p: &mut [f64]) {
    let mut sum = 0.0;
    for v in p.iter_mut() {
        if !(*v >= CLIP_EPS) || !v.is_finite() {
            *v = 0.0;
        }
        sum += *v;
    }
    if sum <= 0.0 {
        let unif = 1.0 / p.len() as f64;
        p.iter_mut().for_each(|v| *v = unif);
    } else {
        p.iter_mut().for_each(|v| *v /= sum);
    }
}

struct RunOutcome {
    p: Vec<f64>,
    eval: Evaluation,
    iterations: u64,
}

/// One optimization run from a given start: multiplicative updates with an
/// adaptive exponent, switching to projected gradient after a stall.
fn run_from(ws: &E0Workspace, start: &[f64], tol_inner: f64, budget: u64) -> RunOutcome {
    let rho = ws.rho;
    let mut p = start.to_vec();
    clip_and_normalize(&mut p);
    let mut eval = ws.evaluate(&p);
    let mut iterations = 0_u64;
    let mut stalled = 0_u32;
    let mut t = 1.0_f64;
    let t_max = 32.0 * (1.0 + rho);
    while eval.residual > tol_inner && iterations < budget {
        iterations += 1;
        // Multiplicative step in log domain: ln p' = ln p - (t/rho) ln(s/F).
        let mut accepted = false;
        let mut t_try = t;
        for _ in 0..60 {
            let mut logs: Vec<f64> = p
                .iter()
                .zip(&eval.log_ratio)
                .map(|(&px, &lr)| {
                    if px == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        px.ln() - (t_try / rho) * lr
                    }
                })
                .collect();
            let mx = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut candidate: Vec<f64> = logs.drain(..).map(|l| (l - mx).exp()).collect();
            clip_and_normalize(&mut candidate);
            let cand_eval = ws.evaluate(&candidate);
            if cand_eval.log_f < eval.log_f {
                p = candidate;
                eval = cand_eval;
                t = (t_try * 1.25).min(t_max);
                accepted = true;
                break;
            }
            t_try *= 0.5;
            if t_try < 1e-6 {
                break;
            }
        }
        if accepted {
            stalled = 0;
            continue;
        }
        stalled += 1;
        t = 1.0;
        if stalled >= STALL_LIMIT / 2 {
            // Projected-gradient step with Armijo backtracking on log F.
            // grad log F (x) = (1+rho) s(x)/F.
            let grad: Vec<f64> = eval.ratio.iter().map(|&r| (1.0 + rho) * r).collect();
            let mut improved = false;
            let mut eta = 1.0;
            for _ in 0..40 {
                let mut candidate: Vec<f64> =
                    p.iter().zip(&grad).map(|(&px, &g)| px - eta * g).collect();
                project_to_simplex(&mut candidate);
                let cand_eval = ws.evaluate(&candidate);
                if cand_eval.log_f < eval.log_f - 1e-16 {
                    p = candidate;
                    eval = cand_eval;
                    improved = true;
                    break;
                }
                eta *= 0.5;
            }
            if improved {
                stalled = 0;
            } else if stalled >= STALL_LIMIT {
                break;
            }
        }
    }
    RunOutcome {
        p,
        eval,
        iterations,
    }
}

/// Lexicographic comparison used to break exact value ties between runs so
/// the reduction over starts has a schedule-independent result.
fn better(a: &RunOutcome, b: &RunOutcome) -> bool {
    let fa = -a.eval.log_f;
    let fb = -b.eval.log_f;
    if fa != fb {
        return fa > fb;
    }
    a.p < b.p
}

/// Maximizes E0(rho, .) over the simplex with a certified global optimum.
///
/// Starts from the uniform distribution; if the multiplicative path cannot
/// push the residual below `tol`, eight random restarts plus the incumbent
/// are retried with the same budget and the best run wins (ties broken by
/// lexicographically smaller distribution). `Err(NonConvergence)` reports
/// the best residual if every start fails.
pub fn maximize_e0(rho: f64, w: &Dmc, tol: f64, max_iter: u64) -> Result<E0Result, SolveError> {
    assert!(rho > 0.0, "rho must be positive");
    assert!(tol > 0.0);
    let ws = E0Workspace::new(rho, w);
    // The value certificate degrades by (1+rho), so aim the residual lower.
    let tol_inner = tol / (1.0 + rho);
    let nx = w.num_inputs();
    let uniform = vec![1.0 / nx as f64; nx];
    let mut total_iter = 0_u64;
    let mut best = run_from(&ws, &uniform, tol_inner, max_iter);
    total_iter += best.iterations;
    if best.eval.residual > tol_inner {
        let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
        let mut starts: Vec<Vec<f64>> = (0..FALLBACK_RESTARTS)
            .map(|_| random_simplex_point(&mut rng, nx))
            .collect();
        starts.push(best.p.clone());
        for start in starts {
            let run = run_from(&ws, &start, tol_inner, max_iter);
            total_iter += run.iterations;
            let done = run.eval.residual <= tol_inner;
            if better(&run, &best) || (done && best.eval.residual > tol_inner) {
                best = run;
            }
            if best.eval.residual <= tol_inner {
                break;
            }
        }
    }
    let result = E0Result {
        rho,
        p_star: Pmf::new(best.p.clone()).expect("iterates stay on the simplex"),
        e0_value: -best.eval.log_f,
        cutoff_rate: -best.eval.log_f / rho,
        kkt_residual: best.eval.residual,
        iterations: total_iter,
    };
    if best.eval.residual > tol {
        return Err(SolveError::NonConvergence {
            residual: best.eval.residual,
            tol,
            iterations: total_iter,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;
    use rand::SeedableRng;

    #[test]
    fn e0_closed_forms() {
        let w = fixtures::noiseless(2);
        let p = Pmf::uniform(2);
        assert!((e0(1.0, &p, &w) - std::f64::consts::LN_2).abs() < 1e-14);

        // BSC(0.1) at rho=1, uniform P: alpha_y = (sqrt(0.9)+sqrt(0.1))/2,
        // E0 = ln 2 - ln(1 + 2 sqrt(0.09)).
        let bsc = fixtures::binary_symmetric(0.1);
        let expected = std::f64::consts::LN_2 - (1.0 + 2.0 * 0.09_f64.sqrt()).ln();
        assert!((e0(1.0, &p, &bsc) - expected).abs() < 1e-14);
        assert!((expected - 0.22314355131420974).abs() < 1e-15);

        assert_eq!(e0(0.0, &p, &bsc), 0.0);
    }

    #[test]
    #[should_panic(expected = "rho must be nonnegative")]
    fn e0_rejects_negative_rho() {
        let w = fixtures::noiseless(2);
        e0(-0.5, &Pmf::uniform(2), &w);
    }

    #[test]
    fn kkt_residual_flags_optimality() {
        let bsc = fixtures::binary_symmetric(0.1);
        // Symmetry makes uniform optimal.
        let (res, slacks) = kkt_residual(1.0, &Pmf::uniform(2), &bsc);
        assert!(res < 1e-12, "residual {res}");
        assert!(slacks.iter().all(|s| s.abs() < 1e-12));
        // A point mass is far from optimal: the unused input has strictly
        // positive slack.
        let (res2, slacks2) = kkt_residual(1.0, &Pmf::point_mass(2, 0), &bsc);
        assert!(res2 > 0.01);
        assert!(slacks2[1] > 0.0);
    }

    #[test]
    fn kkt_residual_zero_on_noiseless_uniform() {
        let w = fixtures::noiseless(2);
        let (res, _) = kkt_residual(1.0, &Pmf::uniform(2), &w);
        assert!(res < 1e-15);
    }

    #[test]
    fn maximize_on_bsc_finds_uniform() {
        let bsc = fixtures::binary_symmetric(0.1);
        let r = maximize_e0(1.0, &bsc, 1e-9, 100_000).unwrap();
        assert!((r.p_star[0] - 0.5).abs() < 1e-6);
        let expected = std::f64::consts::LN_2 - (1.6_f64).ln();
        assert!((r.cutoff_rate - expected).abs() < 1e-9);
        assert!(r.kkt_residual <= 1e-9);
    }

    #[test]
    fn maximize_on_noiseless_fig1_reaches_ln3() {
        let w = fixtures::fig1(0.0);
        let r = maximize_e0(1.0, &w, 1e-9, 100_000).unwrap();
        assert!((r.cutoff_rate - 3.0_f64.ln()).abs() < 1e-9);
        for &px in r.p_star.iter() {
            assert!((px - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn maximize_on_fig1_beats_uniform_and_matches_closed_form() {
        // Closed form at rho=1: the maximizing P splits mass between the
        // BSC pair and the isolated symbol; cutoff = ln(1 + 2/(1+2 sqrt(eps(1-eps)))).
        let eps = 0.1;
        let w = fixtures::fig1(eps);
        let r = maximize_e0(1.0, &w, 1e-9, 100_000).unwrap();
        let a = 1.0 + 2.0 * (eps * (1.0 - eps)).sqrt();
        let expected = (1.0 + 2.0 / a).ln();
        assert!(
            (r.cutoff_rate - expected).abs() < 1e-9,
            "cutoff {} vs {}",
            r.cutoff_rate,
            expected
        );
    }

    #[test]
    fn single_input_channel_is_trivial() {
        let w = Dmc::from_rows(vec![vec![0.3, 0.7]]).unwrap();
        let r = maximize_e0(2.0, &w, 1e-9, 1000).unwrap();
        assert!(r.e0_value.abs() < 1e-12);
        assert_eq!(r.p_star.as_slice(), &[1.0]);
    }

    #[test]
    fn boundary_optimum_is_reached_exactly() {
        // Strongly asymmetric channel at large rho: the optimum drops one
        // input entirely; the clip must land there with a clean certificate.
        let w = Dmc::from_rows(vec![
            vec![0.5, 0.5, 0.0],
            vec![0.45, 0.45, 0.1],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let r = maximize_e0(7.0, &w, 1e-9, 200_000).unwrap();
        assert!(r.kkt_residual <= 1e-9);
        // Input 1 is dominated at this rho.
        assert!(r.p_star[1] < 1e-9, "p_star = {:?}", r.p_star.as_slice());
    }

    #[test]
    fn large_rho_converges() {
        let w = fixtures::fig1(0.1);
        let r = maximize_e0(100.0, &w, 1e-9, 400_000).unwrap();
        assert!(r.kkt_residual <= 1e-9);
        // At large rho the cutoff approaches -log pi0 = ln 2 from above.
        assert!(r.cutoff_rate > std::f64::consts::LN_2 - 1e-9);
        assert!(r.cutoff_rate < 0.75);
    }

    #[test]
    fn small_rho_converges_toward_capacity() {
        let w = fixtures::binary_symmetric(0.1);
        let r = maximize_e0(1e-3, &w, 1e-9, 200_000).unwrap();
        let hb = |p: f64| -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        let c = std::f64::consts::LN_2 - hb(0.1);
        assert!((r.cutoff_rate - c).abs() < 1e-3);
    }

    #[test]
    fn perturbations_never_improve_a_certified_optimum() {
        use rand::Rng;
        let w = fixtures::fig2(0.05, 0.2);
        let r = maximize_e0(1.5, &w, 1e-10, 200_000).unwrap();
        let base = r.e0_value;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut q: Vec<f64> = r
                .p_star
                .iter()
                .map(|&p| p + 1e-4 * (rng.gen::<f64>() - 0.5))
                .collect();
            project_to_simplex(&mut q);
            let v = e0(1.5, &Pmf::new(q).unwrap(), &w);
            assert!(v <= base + 1e-7, "perturbation improved E0: {v} > {base}");
        }
    }

    #[test]
    fn value_matches_dense_grid_on_a_random_3x3() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let w = fixtures::random_dense(&mut rng, 3, 3, 0.02);
        let r = maximize_e0(2.0, &w, 1e-9, 200_000).unwrap();
        // Coarse simplex grid cross-check.
        let mut best = 0.0_f64;
        let steps = 60;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let p = Pmf::new(vec![
                    i as f64 / steps as f64,
                    j as f64 / steps as f64,
                    (steps - i - j) as f64 / steps as f64,
                ])
                .unwrap();
                best = best.max(e0(2.0, &p, &w));
            }
        }
        assert!(r.e0_value >= best - 1e-9);
        assert!(r.e0_value <= best + 0.01, "grid should come close");
    }
}
