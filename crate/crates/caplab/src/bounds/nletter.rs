//! Multi-letter evaluation of the listsize lower bound on the product
//! channel, normalized per channel use.

use crate::bounds::{forney_cal_rho_bound, BoundKind, BoundValue};
use crate::channel::{product_channel, Dmc, Pmf};
use crate::SolveError;

/// Largest sequence alphabet the exhaustive support scan accepts.
const MAX_SEQUENCES: u128 = 20;

/// How the input distribution on sequences is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NLetterMode {
    /// Scan every nonempty set of input sequences and use the uniform
    /// distribution on the best one.
    ExhaustiveUniform,
    /// Use an i.i.d. product of one single-letter distribution.
    Product,
}

/// Evaluates the listsize lower bound on the n-fold product channel and
/// divides by n. In `Product` mode `p1` picks the single-letter factor
/// (uniform when `None`) and the result matches the single-letter bound
/// exactly by additivity; tests pin that identity. `ExhaustiveUniform`
/// mode searches all uniform-on-a-support distributions and can only do
/// better, at exponential cost in the sequence count.
pub fn n_letter_forney(
    rho: f64,
    w: &Dmc,
    n: u32,
    mode: NLetterMode,
    p1: Option<&[f64]>,
) -> Result<BoundValue, SolveError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    if n == 0 {
        return Err(SolveError::InvalidArgument(
            "block length must be at least 1".to_string(),
        ));
    }
    match mode {
        NLetterMode::ExhaustiveUniform => {
            if p1.is_some() {
                return Err(SolveError::InvalidArgument(
                    "exhaustive mode chooses its own input distribution".to_string(),
                ));
            }
            exhaustive_uniform(rho, w, n)
        }
        NLetterMode::Product => product_mode(rho, w, n, p1),
    }
}

fn product_mode(
    rho: f64,
    w: &Dmc,
    n: u32,
    p1: Option<&[f64]>,
) -> Result<BoundValue, SolveError> {
    let nx = w.num_inputs();
    let single: Vec<f64> = match p1 {
        Some(p) => {
            if p.len() != nx {
                return Err(SolveError::InvalidArgument(format!(
                    "p1 has {} entries for a {nx}-input channel",
                    p.len()
                )));
            }
            p.to_vec()
        }
        None => vec![1.0 / nx as f64; nx],
    };
    let wn = product_channel(w, n)?;
    let mut pn = vec![1.0; wn.num_inputs()];
    let mut digits = vec![0usize; n as usize];
    for (xi, mass) in pn.iter_mut().enumerate() {
        crate::channel::decode_tuple(xi, nx, &mut digits);
        for &d in &digits {
            *mass *= single[d];
        }
    }
    let total: f64 = pn.iter().sum();
    for v in &mut pn {
        *v /= total;
    }
    let value = forney_cal_rho_bound(rho, &pn, &wn)? / n as f64;
    Ok(
        BoundValue::new("n_letter_forney_product", BoundKind::Lower, value, rho)
            .with_p(Pmf::new(single)?),
    )
}

fn exhaustive_uniform(rho: f64, w: &Dmc, n: u32) -> Result<BoundValue, SolveError> {
    let k = (w.num_inputs() as u128).pow(n);
    if k > MAX_SEQUENCES {
        return Err(SolveError::SizeCap {
            size: k,
            cap: MAX_SEQUENCES,
        });
    }
    let wn = product_channel(w, n)?;
    let k = wn.num_inputs();
    let ny = wn.num_outputs();

    // Sparse row views so each Gray-code flip touches only the outputs
    // the flipped sequence can actually produce.
    let row_support: Vec<Vec<(usize, f64)>> = (0..k)
        .map(|x| {
            (0..ny)
                .filter(|&y| wn.w(x, y) > 0.0)
                .map(|y| (y, wn.w(x, y)))
                .collect()
        })
        .collect();

    let cnt_pow: Vec<f64> = (0..=k).map(|c| (c as f64).powf(rho)).collect();
    let size_pow: Vec<f64> = (0..=k).map(|s| (s as f64).powf(1.0 + rho)).collect();

    // State for the support described by the current Gray code:
    // per-output member count and summed transition mass, plus the
    // running inner sum over outputs of colsum * cnt^rho.
    let mut in_set = vec![false; k];
    let mut cnt = vec![0usize; ny];
    let mut colsum = vec![0.0f64; ny];
    let mut inner = 0.0f64;
    let mut size = 0usize;

    let mut best_obj = f64::INFINITY;
    let mut best_mask: u32 = 0;
    let total: u32 = 1 << k;
    for i in 1..total {
        let b = i.trailing_zeros() as usize;
        let joining = !in_set[b];
        in_set[b] = joining;
        for &(y, wv) in &row_support[b] {
            inner -= colsum[y] * cnt_pow[cnt[y]];
            if joining {
                cnt[y] += 1;
                colsum[y] += wv;
            } else {
                cnt[y] -= 1;
                colsum[y] -= wv;
            }
            inner += colsum[y] * cnt_pow[cnt[y]];
        }
        size = if joining { size + 1 } else { size - 1 };
        if size == 0 {
            continue;
        }
        // Periodic exact refresh so float drift from the incremental
        // updates cannot steer the argmin.
        if i % 65_536 == 0 {
            inner = (0..ny).map(|y| colsum[y] * cnt_pow[cnt[y]]).sum();
        }
        let obj = inner / size_pow[size];
        if obj < best_obj {
            best_obj = obj;
            best_mask = i ^ (i >> 1);
        }
    }

    // Recompute the winning support from scratch for the reported value.
    let members: Vec<usize> = (0..k).filter(|&x| best_mask >> x & 1 == 1).collect();
    let s = members.len() as f64;
    let mut cnt = vec![0usize; ny];
    let mut colsum = vec![0.0f64; ny];
    for &x in &members {
        for &(y, wv) in &row_support[x] {
            cnt[y] += 1;
            colsum[y] += wv;
        }
    }
    let sum: f64 = (0..ny)
        .map(|y| colsum[y] * cnt_pow[cnt[y]])
        .sum::<f64>()
        / s.powf(1.0 + rho);
    let value = ((-sum.ln() / rho) / n as f64).max(0.0);

    let mut p_seq = vec![0.0; k];
    for &x in &members {
        p_seq[x] = 1.0 / s;
    }
    Ok(
        BoundValue::new("n_letter_forney_exhaustive", BoundKind::Lower, value, rho)
            .with_p(Pmf::new(p_seq)?),
    )
}
