//! Minimum Shannon capacity over dominated subchannels: projected
//! subgradient descent on the convex function V -> C(V) over row-stochastic
//! V that vanish wherever W does.

use super::pi0::pi0;
use super::shannon::ba_capacity;
use crate::channel::{czero_positive, Dmc};
use crate::numeric::project_to_simplex;
use crate::SolveError;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const OUTER_ITERATIONS: u64 = 5_000;
const MULTISTART: usize = 4;
const INNER_TOL: f64 = 1e-10;
/// Iteration budget per inner solve during the subgradient scan. On
/// subchannels whose capacity-achieving input sits on the boundary the
/// duality gap closes sublinearly, so a large budget burns in full
/// without improving the Danskin direction; the scan needs only a good
/// maximizer, not a certified one.
const INNER_ITER_SCAN: u64 = 2_000;
/// Iteration budget for the final certified evaluation.
const INNER_ITER_FINAL: u64 = 200_000;
const SEED: u64 = 0x51C0;
/// Log-ratio clamp for subgradient entries at the boundary of the polytope.
const GRAD_CLAMP: f64 = 50.0;

/// Result of the capacity minimization.
#[derive(Clone, Debug)]
pub struct MinCapacityResult {
    /// Smallest capacity found, in nats.
    pub value: f64,
    /// The achieving subchannel.
    pub v_star: Dmc,
    /// `|value + log pi0|` when the zero-error capacity is positive, where
    /// the two quantities must agree; absent otherwise.
    pub certificate_residual: Option<f64>,
    /// Total inner capacity evaluations across all starts.
    pub iterations: u64,
}

/// Minimizes C(V) over subchannels `V << W` by multistart projected
/// subgradient with diminishing steps 1/k and an inner alternating
/// maximization evaluated to a 1e-10 duality gap.
pub fn min_capacity_subchannels(
    w: &Dmc,
    tol: f64,
) -> Result<MinCapacityResult, SolveError> {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let pi = pi0(w)?;
    let czero = czero_positive(w);
    let target = -pi.pi0.ln();

    let mut starts: Vec<Vec<Vec<f64>>> = vec![w.rows().to_vec()];
    if let Some(v) = dual_seed(w, &pi.duals) {
        starts.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while starts.len() < MULTISTART {
        starts.push(perturbed_seed(w, &mut rng));
    }

    let mut best_value = f64::INFINITY;
    let mut best_rows: Vec<Vec<f64>> = w.rows().to_vec();
    let mut iterations = 0u64;
    'starts: for mut rows in starts {
        for k in 1..=OUTER_ITERATIONS {
            iterations += 1;
            let v = subchannel(w, &rows)?;
            let cap = ba_capacity(&v, INNER_TOL, INNER_ITER_SCAN);
            if cap.capacity < best_value {
                best_value = cap.capacity;
                best_rows = rows.clone();
            }
            if czero && (best_value - target).abs() <= 0.5 * tol {
                break 'starts;
            }
            // Capacity is nonnegative, so a value this close to zero
            // cannot be improved by more than the tolerance.
            if best_value <= 0.5 * tol {
                break 'starts;
            }
            // Danskin subgradient of max_P I(P, V) at the inner maximizer.
            let q = v.output_distribution(&cap.p_star);
            let step = 1.0 / k as f64;
            for x in 0..nx {
                let px = cap.p_star[x];
                if px == 0.0 {
                    continue;
                }
                for y in 0..ny {
                    if w.w(x, y) > 0.0 {
                        let ratio = if q[y] > 0.0 {
                            (rows[x][y].max(f64::MIN_POSITIVE) / q[y]).ln()
                        } else {
                            GRAD_CLAMP
                        };
                        let g = px * ratio.clamp(-GRAD_CLAMP, GRAD_CLAMP);
                        rows[x][y] -= step * g;
                    }
                }
            }
            for (x, row) in rows.iter_mut().enumerate() {
                project_row_onto_support(row, w.row(x));
            }
        }
    }

    let v_star = subchannel(w, &best_rows)?;
    let value = ba_capacity(&v_star, INNER_TOL, INNER_ITER_FINAL).capacity;
    let certificate_residual = czero.then(|| (value + pi.pi0.ln()).abs());
    if let Some(res) = certificate_residual {
        if res > tol {
            return Err(SolveError::NonConvergence {
                residual: res,
                tol,
                iterations,
            });
        }
    }
    Ok(MinCapacityResult {
        value,
        v_star,
        certificate_residual,
        iterations,
    })
}

/// Builds a Dmc from working rows, renormalizing away projection round-off.
fn subchannel(w: &Dmc, rows: &[Vec<f64>]) -> Result<Dmc, SolveError> {
    let cleaned: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(x, row)| {
            // Entries this small are numerically zero for every capacity
            // purpose; dropping them keeps the channel validator happy.
            let mut r: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(y, &v)| {
                    if w.w(x, y) > 0.0 && v > 1e-250 {
                        v
                    } else {
                        0.0
                    }
                })
                .collect();
            let total: f64 = r.iter().sum();
            for v in r.iter_mut() {
                *v /= total;
            }
            r
        })
        .collect();
    Dmc::from_rows(cleaned).map_err(SolveError::Channel)
}

/// Candidate built from the pi0 dual weights: V(y|x) proportional to
/// lambda_y on the support of row x. When the zero-error capacity is
/// positive this candidate attains capacity exactly -log pi0.
fn dual_seed(w: &Dmc, duals: &[f64]) -> Option<Vec<Vec<f64>>> {
    let mut rows = Vec::with_capacity(w.num_inputs());
    for x in 0..w.num_inputs() {
        let mut row = vec![0.0; w.num_outputs()];
        let mut s = 0.0;
        for (y, lv) in duals.iter().enumerate() {
            if w.w(x, y) > 0.0 {
                row[y] = *lv;
                s += *lv;
            }
        }
        if s <= 1e-9 {
            return None;
        }
        for v in row.iter_mut() {
            *v /= s;
        }
        rows.push(row);
    }
    Some(rows)
}

fn perturbed_seed<R: Rng>(w: &Dmc, rng: &mut R) -> Vec<Vec<f64>> {
    w.rows()
        .iter()
        .map(|row| {
            let mut r: Vec<f64> = row
                .iter()
                .map(|&v| {
                    if v > 0.0 {
                        v * rng.gen_range(0.25..4.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            let total: f64 = r.iter().sum();
            for v in r.iter_mut() {
                *v /= total;
            }
            r
        })
        .collect()
}

/// Euclidean projection of one working row onto the simplex restricted to
/// the support of the reference row.
fn project_row_onto_support(row: &mut [f64], reference: &[f64]) {
    let support: Vec<usize> = (0..row.len()).filter(|&y| reference[y] > 0.0).collect();
    let mut sub: Vec<f64> = support.iter().map(|&y| row[y]).collect();
    project_to_simplex(&mut sub);
    for v in row.iter_mut() {
        *v = 0.0;
    }
    for (i, &y) in support.iter().enumerate() {
        row[y] = sub[i];
    }
}
