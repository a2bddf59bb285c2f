//! Zero-set lower bounds evaluated at a fixed input distribution, the
//! matching variational form over output distributions, and their
//! maximization over input distributions.

use crate::bounds::{BoundKind, BoundValue};
use crate::channel::{Dmc, Pmf};
use crate::numeric::{project_to_simplex, random_simplex_point, KahanSum};
use crate::SolveError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SWEEP_STEP: f64 = 1e-4;
const ASCENT_ITER: usize = 600;
const SEED: u64 = 0xF0E1;

fn validate_p(p: &[f64], w: &Dmc) {
    assert_eq!(p.len(), w.num_inputs(), "input distribution length");
}

/// Probability mass the input distribution puts on the inputs that can
/// produce each output.
fn support_masses(p: &[f64], w: &Dmc) -> Vec<f64> {
    (0..w.num_outputs())
        .map(|y| {
            let mut s = KahanSum::default();
            for x in 0..w.num_inputs() {
                if w.w(x, y) > 0.0 {
                    s.add(p[x]);
                }
            }
            s.value()
        })
        .collect()
}

/// Lower bound on the erasure-only capacity at input distribution `p`:
/// the expected negative log mass of the inputs consistent with the
/// received output.
pub fn forney_ceo_bound(p: &[f64], w: &Dmc) -> f64 {
    validate_p(p, w);
    let a = w.output_distribution(p);
    let b = support_masses(p, w);
    let mut acc = KahanSum::default();
    for y in 0..w.num_outputs() {
        if a[y] > 0.0 {
            acc.add(-a[y] * b[y].ln());
        }
    }
    acc.value().max(0.0)
}

/// Lower bound on the listsize capacity at exponent `rho` and input
/// distribution `p`.
pub fn forney_cal_rho_bound(rho: f64, p: &[f64], w: &Dmc) -> Result<f64, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    validate_p(p, w);
    let a = w.output_distribution(p);
    let b = support_masses(p, w);
    Ok(cal_rho_from_parts(rho, &a, &b))
}

fn cal_rho_from_parts(rho: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut s = KahanSum::default();
    for y in 0..a.len() {
        if a[y] > 0.0 {
            s.add(a[y] * b[y].powf(rho));
        }
    }
    (-s.value().ln() / rho).max(0.0)
}

/// Evaluates the listsize bound through its variational form: the
/// optimizing output distribution Q* is proportional to (PW)(y) times
/// the consistent-mass to the power rho, and the value splits into an
/// expected log-mass term plus a scaled divergence from PW. Returns the
/// value together with Q*. The value agrees with
/// [`forney_cal_rho_bound`] to near machine precision; tests pin the
/// two to 1e-12.
pub fn forney_variational_form(
    rho: f64,
    p: &[f64],
    w: &Dmc,
) -> Result<(f64, Pmf), SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    validate_p(p, w);
    let a = w.output_distribution(p);
    let b = support_masses(p, w);
    let ny = w.num_outputs();

    let mut q: Vec<f64> = (0..ny)
        .map(|y| if a[y] > 0.0 { a[y] * b[y].powf(rho) } else { 0.0 })
        .collect();
    let total: f64 = q.iter().sum();
    if !(total > 0.0) {
        return Err(SolveError::InvalidArgument(
            "input distribution reaches no output".to_string(),
        ));
    }
    for v in &mut q {
        *v /= total;
    }

    // F(Q*) = -sum_y Q*(y) log B(y), plus the divergence correction.
    let mut f_term = KahanSum::default();
    let mut d_term = KahanSum::default();
    for y in 0..ny {
        if q[y] > 0.0 {
            f_term.add(-q[y] * b[y].ln());
            d_term.add(q[y] * (q[y] / a[y]).ln());
        }
    }
    let value = f_term.value() + d_term.value() / rho;
    Ok((value.max(0.0), Pmf::new(q)?))
}

/// Objective shapes the shared ascent engine can maximize.
enum Objective {
    CalRho(f64),
    Ceo,
}

impl Objective {
    fn eval(&self, p: &[f64], w: &Dmc) -> f64 {
        let a = w.output_distribution(p);
        let b = support_masses(p, w);
        match self {
            Objective::CalRho(rho) => cal_rho_from_parts(*rho, &a, &b),
            Objective::Ceo => {
                let mut acc = KahanSum::default();
                for y in 0..a.len() {
                    if a[y] > 0.0 {
                        acc.add(-a[y] * b[y].ln());
                    }
                }
                acc.value().max(0.0)
            }
        }
    }

    fn grad(&self, p: &[f64], w: &Dmc) -> Vec<f64> {
        let nx = w.num_inputs();
        let ny = w.num_outputs();
        let a = w.output_distribution(p);
        let b = support_masses(p, w);
        let mut g = vec![0.0; nx];
        match self {
            Objective::CalRho(rho) => {
                let mut s = 0.0;
                for y in 0..ny {
                    if a[y] > 0.0 {
                        s += a[y] * b[y].powf(*rho);
                    }
                }
                if !(s > 0.0) {
                    return g;
                }
                for (x, gx) in g.iter_mut().enumerate() {
                    let mut ds = 0.0;
                    for y in 0..ny {
                        if b[y] > 0.0 {
                            ds += w.w(x, y) * b[y].powf(*rho);
                            if w.w(x, y) > 0.0 {
                                ds += a[y] * rho * b[y].powf(rho - 1.0);
                            }
                        }
                    }
                    *gx = -ds / (rho * s);
                }
            }
            Objective::Ceo => {
                for (x, gx) in g.iter_mut().enumerate() {
                    let mut d = 0.0;
                    for y in 0..ny {
                        if b[y] > 0.0 {
                            d += w.w(x, y) * b[y].ln();
                            if w.w(x, y) > 0.0 {
                                d += a[y] / b[y];
                            }
                        }
                    }
                    *gx = -d;
                }
            }
        }
        g
    }
}

/// Projected gradient ascent with backtracking from one start point.
fn ascend(obj: &Objective, w: &Dmc, start: &[f64]) -> (f64, Vec<f64>) {
    let mut p = start.to_vec();
    let mut value = obj.eval(&p, w);
    let mut stall = 0;
    for _ in 0..ASCENT_ITER {
        let g = obj.grad(&p, w);
        let mut eta = 1.0;
        let mut improved = false;
        while eta > 1e-12 {
            let mut cand: Vec<f64> = p.iter().zip(&g).map(|(pi, gi)| pi + eta * gi).collect();
            project_to_simplex(&mut cand);
            let cv = obj.eval(&cand, w);
            if cv > value {
                improved = cv - value > 1e-13;
                p = cand;
                value = cv;
                break;
            }
            eta *= 0.5;
        }
        if improved {
            stall = 0;
        } else {
            stall += 1;
            if stall >= 3 {
                break;
            }
        }
    }
    (value, p)
}

fn maximize(obj: Objective, name: &str, w: &Dmc, restarts: usize) -> Result<BoundValue, SolveError> {
    let nx = w.num_inputs();
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / nx as f64; nx]];
    // The covering-game optimum certifies the -log pi0 floor, so it is
    // always worth a restart.
    starts.push(crate::capacity::pi0(w)?.p_star.to_vec());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while starts.len() < restarts.max(2) {
        starts.push(random_simplex_point(&mut rng, nx));
    }

    let mut best_v = f64::NEG_INFINITY;
    let mut best_p = starts[0].clone();

    // A dense one-dimensional sweep is affordable for binary inputs and
    // makes the boundary maxima of the listsize objective reliable.
    if nx == 2 {
        let steps = (1.0 / SWEEP_STEP).round() as usize;
        for i in 0..=steps {
            let t = i as f64 * SWEEP_STEP;
            let cand = vec![1.0 - t, t];
            let v = obj.eval(&cand, w);
            if v > best_v {
                best_v = v;
                best_p = cand;
            }
        }
        starts.push(best_p.clone());
    }

    for s in &starts {
        let (v, p) = ascend(&obj, w, s);
        if v > best_v {
            best_v = v;
            best_p = p;
        }
    }

    // First-order stationarity gap on the simplex; zero at an exact
    // constrained maximizer.
    let g = obj.grad(&best_p, w);
    let gmax = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gmean: f64 = best_p.iter().zip(&g).map(|(pi, gi)| pi * gi).sum();
    let residual = (gmax - gmean).max(0.0);

    let rho = match obj {
        Objective::CalRho(r) => r,
        Objective::Ceo => f64::INFINITY,
    };
    Ok(
        BoundValue::new(name, BoundKind::Lower, best_v, rho)
            .with_p(Pmf::new(best_p)?)
            .with_certificate(residual, Vec::new()),
    )
}

/// Maximizes the listsize lower bound over input distributions with
/// multistart projected gradient ascent. The restart set always
/// contains the uniform distribution and the covering-game optimum, so
/// the result never falls more than solver noise below -log pi0.
pub fn maximize_forney(rho: f64, w: &Dmc, restarts: usize) -> Result<BoundValue, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    maximize(Objective::CalRho(rho), "forney_cal_rho", w, restarts)
}

/// Maximizes the erasure-only lower bound over input distributions.
/// `rho` in the returned value is infinite: the bound is the large-rho
/// limit of the listsize family.
pub fn maximize_forney_ceo(w: &Dmc, restarts: usize) -> Result<BoundValue, SolveError> {
    maximize(Objective::Ceo, "forney_ceo", w, restarts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::pi0;
    use crate::channel::fixtures;

    #[test]
    fn erasure_channel_closed_forms() {
        for delta in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let w = fixtures::binary_erasure(delta);
            let p = [0.5, 0.5];
            let ceo = forney_ceo_bound(&p, &w);
            assert!(
                (ceo - (1.0 - delta) * 2.0f64.ln()).abs() < 1e-12,
                "delta={delta} ceo={ceo}"
            );
            let cal = forney_cal_rho_bound(1.0, &p, &w).unwrap();
            let expect = -((1.0 + delta) / 2.0f64).ln();
            assert!((cal - expect).abs() < 1e-12, "delta={delta} cal={cal}");
        }
    }

    #[test]
    fn variational_form_matches_direct_value() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for trial in 0..20 {
            let w = if trial % 2 == 0 {
                fixtures::random_sparse(&mut rng, 3, 4, 0.6)
            } else {
                fixtures::random_dense(&mut rng, 4, 3, 0.02)
            };
            for rho in [0.5, 1.0, 2.0] {
                let p = random_simplex_point(&mut rng, w.num_inputs());
                let direct = forney_cal_rho_bound(rho, &p, &w).unwrap();
                let (variational, q) = forney_variational_form(rho, &p, &w).unwrap();
                assert!(
                    (direct - variational).abs() <= 1e-12,
                    "trial {trial} rho {rho}: {direct} vs {variational}"
                );
                let qs: f64 = q.iter().sum();
                assert!((qs - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_bounds_hit_log_alphabet() {
        let w = fixtures::noiseless(3);
        let p = [1.0 / 3.0; 3];
        let target = 3.0f64.ln();
        assert!((forney_ceo_bound(&p, &w) - target).abs() < 1e-12);
        assert!((forney_cal_rho_bound(2.0, &p, &w).unwrap() - target).abs() < 1e-12);
    }

    #[test]
    fn maximized_bound_clears_the_covering_floor() {
        for w in [
            fixtures::fig1(0.1),
            fixtures::fig1(0.01),
            fixtures::z_channel(0.3),
        ] {
            let floor = -pi0(&w).unwrap().pi0.ln();
            for rho in [0.5, 1.0, 2.0] {
                let b = maximize_forney(rho, &w, 4).unwrap();
                assert!(
                    b.value >= floor - 1e-6,
                    "rho={rho}: value={} floor={floor}",
                    b.value
                );
                assert!(b.p_used.is_some());
                assert!(b.certificate.is_some());
            }
            let ceo = maximize_forney_ceo(&w, 4).unwrap();
            assert!(ceo.value >= floor - 1e-6);
        }
    }

    #[test]
    fn erasure_channel_maximization_stays_uniform() {
        for delta in [0.2, 0.5, 0.8] {
            let w = fixtures::binary_erasure(delta);
            let cal = maximize_forney(1.0, &w, 4).unwrap();
            let expect = -((1.0 + delta) / 2.0f64).ln();
            assert!(
                (cal.value - expect).abs() < 1e-9,
                "delta={delta}: {} vs {expect}",
                cal.value
            );
            let ceo = maximize_forney_ceo(&w, 4).unwrap();
            let expect_ceo = (1.0 - delta) * 2.0f64.ln();
            assert!(
                (ceo.value - expect_ceo).abs() < 1e-9,
                "delta={delta}: {} vs {expect_ceo}",
                ceo.value
            );
        }
    }

    #[test]
    fn all_positive_channel_gives_zero() {
        // The consistent-input mass is one at every output, so the
        // bounds vanish up to the rounding in the output distribution.
        let w = fixtures::binary_symmetric(0.2);
        let p = [0.5, 0.5];
        assert!(forney_ceo_bound(&p, &w) <= 1e-12);
        assert!(forney_cal_rho_bound(1.0, &p, &w).unwrap() <= 1e-12);
        let b = maximize_forney(1.0, &w, 3).unwrap();
        assert!(b.value <= 1e-12);
    }

    #[test]
    fn rejects_bad_rho() {
        let w = fixtures::fig1(0.1);
        let p = [1.0 / 3.0; 3];
        assert!(forney_cal_rho_bound(0.0, &p, &w).is_err());
        assert!(forney_cal_rho_bound(f64::NAN, &p, &w).is_err());
        assert!(maximize_forney(-1.0, &w, 3).is_err());
    }
}
