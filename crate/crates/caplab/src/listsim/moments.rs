//! Exact and Monte-Carlo evaluation of list-size moments.
//!
//! For a code with M messages used over a channel W, the report captures the
//! rho-th moments of the two list sizes under a uniformly drawn message,
//! together with the probabilities that either list has two or more
//! entries. Exact evaluation enumerates every output block; the Monte-Carlo
//! path samples transmissions and scans the messages for each sampled block.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::Dmc;
use crate::numeric::KahanSum;
use crate::SolveError;

use super::code::Code;

/// Output-enumeration cap for exact moment evaluation.
const ENUM_CAP: u128 = 1_000_000;

/// How a [`MomentReport`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    Exact,
    MonteCarlo,
}

/// List-size moments of a code at one value of rho.
///
/// `list_moment` is E[|L(Y)|^rho] for the erasure list and `cutoff_moment`
/// is E[|L(M,Y)|^rho] for the at-least-as-likely list; `erasure_prob` and
/// `ml_error_prob` are the probabilities that the respective lists have two
/// or more entries. Both moments are at least 1 because every list contains
/// at least the observed or compared message almost surely. The list moment
/// is not, in general, below the cutoff moment or vice versa: containment
/// between the two lists holds only conditionally on the true message having
/// positive likelihood.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub rho: f64,
    pub list_moment: f64,
    pub cutoff_moment: f64,
    pub erasure_prob: f64,
    pub ml_error_prob: f64,
    pub method: MomentMethod,
    /// Sample count, Monte-Carlo only.
    pub trials: Option<u64>,
    /// Base seed, Monte-Carlo only.
    pub seed: Option<u64>,
    /// Standard error of `list_moment`, Monte-Carlo with at least 2 trials.
    pub list_std_error: Option<f64>,
    /// Standard error of `cutoff_moment`, Monte-Carlo with at least 2 trials.
    pub cutoff_std_error: Option<f64>,
}

/// Markov bound on the two-or-more probability implied by a rho-th moment:
/// `Pr(|L| >= 2) <= (E[|L|^rho] - 1) / (2^rho - 1)`, using that `|L| >= 1`.
pub fn markov_list_bound(moment: f64, rho: f64) -> f64 {
    assert!(rho > 0.0, "rho must be positive");
    (moment - 1.0) / (2f64.powf(rho) - 1.0)
}

/// Exact list-size moments by enumeration of all `|Y|^n` output blocks,
/// averaging over a uniform message. Ties in the at-least-as-likely list are
/// kept, and zero likelihoods are structural, so no tolerance enters.
pub fn exact_moments(w: &Dmc, code: &Code, rho: f64) -> Result<MomentReport, SolveError> {
    validate(w, code, rho)?;
    let n = code.n();
    let ny = w.num_outputs();
    let total = (ny as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > ENUM_CAP {
        return Err(SolveError::SizeCap {
            size: total,
            cap: ENUM_CAP,
        });
    }
    let mm = code.num_messages();
    let weight = 1.0 / mm as f64;
    let mut list_moment = KahanSum::new();
    let mut cutoff_moment = KahanSum::new();
    let mut erasure_prob = KahanSum::new();
    let mut ml_error_prob = KahanSum::new();
    let mut y = vec![0usize; n];
    let mut lik = vec![0.0f64; mm];
    loop {
        for (m, l) in lik.iter_mut().enumerate() {
            *l = code.likelihood(w, m, &y);
        }
        let erasure_size = lik.iter().filter(|&&l| l > 0.0).count();
        let erasure_pow = (erasure_size as f64).powf(rho);
        for m in 0..mm {
            let p = weight * lik[m];
            if p == 0.0 {
                continue;
            }
            let cutoff_size = lik.iter().filter(|&&l| l >= lik[m]).count();
            list_moment.add(p * erasure_pow);
            cutoff_moment.add(p * (cutoff_size as f64).powf(rho));
            if erasure_size >= 2 {
                erasure_prob.add(p);
            }
            if cutoff_size >= 2 {
                ml_error_prob.add(p);
            }
        }
        if !advance(&mut y, ny) {
            break;
        }
    }
    Ok(MomentReport {
        rho,
        list_moment: list_moment.value(),
        cutoff_moment: cutoff_moment.value(),
        erasure_prob: erasure_prob.value(),
        ml_error_prob: ml_error_prob.value(),
        method: MomentMethod::Exact,
        trials: None,
        seed: None,
        list_std_error: None,
        cutoff_std_error: None,
    })
}

/// Monte-Carlo list-size moments: each trial draws a uniform message,
/// simulates one transmission, and scans all messages to size both lists.
///
/// Trial `t` uses the RNG stream `t` of the base seed, so the estimate is
/// reproducible and independent of the number of worker threads; trials run
/// in parallel and are reduced in index order.
pub fn mc_moments(
    w: &Dmc,
    code: &Code,
    rho: f64,
    trials: u64,
    seed: u64,
) -> Result<MomentReport, SolveError> {
    validate(w, code, rho)?;
    if trials == 0 {
        return Err(SolveError::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let mm = code.num_messages();
    let samples: Vec<[f64; 4]> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let m = rng.gen_range(0..mm);
            let y = transmit(w, code, m, &mut rng);
            let mut erasure_size = 0usize;
            let mut cutoff_size = 0usize;
            let own = code.likelihood(w, m, &y);
            for mp in 0..mm {
                let l = code.likelihood(w, mp, &y);
                if l > 0.0 {
                    erasure_size += 1;
                }
                if l >= own {
                    cutoff_size += 1;
                }
            }
            [
                (erasure_size as f64).powf(rho),
                (cutoff_size as f64).powf(rho),
                if erasure_size >= 2 { 1.0 } else { 0.0 },
                if cutoff_size >= 2 { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    let mean = |idx: usize| {
        let mut acc = KahanSum::new();
        for s in &samples {
            acc.add(s[idx]);
        }
        acc.value() / trials as f64
    };
    let list_moment = mean(0);
    let cutoff_moment = mean(1);
    let std_error = |idx: usize, mean: f64| {
        if trials < 2 {
            return None;
        }
        let mut acc = KahanSum::new();
        for s in &samples {
            let d = s[idx] - mean;
            acc.add(d * d);
        }
        Some((acc.value() / (trials as f64 * (trials - 1) as f64)).sqrt())
    };
    Ok(MomentReport {
        rho,
        list_moment,
        cutoff_moment,
        erasure_prob: mean(2),
        ml_error_prob: mean(3),
        method: MomentMethod::MonteCarlo,
        trials: Some(trials),
        seed: Some(seed),
        list_std_error: std_error(0, list_moment),
        cutoff_std_error: std_error(1, cutoff_moment),
    })
}

/// Simulates one transmission of message `m` and returns the output block.
/// Feedback strategies pick each input from the outputs already produced.
pub(super) fn transmit<R: Rng>(w: &Dmc, code: &Code, m: usize, rng: &mut R) -> Vec<usize> {
    let n = code.n();
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let x = match code {
            Code::Block(b) => b.codeword(m)[i],
            Code::Feedback(s) => s.input(m, &y),
        };
        y.push(sample_index(rng, w.row(x)));
    }
    y
}

/// Samples an index from a probability row. Entries that are exactly zero
/// are never returned, so structural zeros stay structural under sampling;
/// the final positive entry absorbs any rounding deficit of the cumulative
/// scan.
pub(super) fn sample_index<R: Rng>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

fn validate(w: &Dmc, code: &Code, rho: f64) -> Result<(), SolveError> {
    if !(rho > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    if code.num_inputs() > w.num_inputs() {
        return Err(SolveError::InvalidArgument(format!(
            "code alphabet size {} exceeds channel input count {}",
            code.num_inputs(),
            w.num_inputs()
        )));
    }
    Ok(())
}

/// Advances `y` through the mixed-radix odometer over `0..ny` per digit;
/// returns false after the last block.
fn advance(y: &mut [usize], ny: usize) -> bool {
    for digit in y.iter_mut().rev() {
        *digit += 1;
        if *digit < ny {
            return true;
        }
        *digit = 0;
    }
    false
}
