//! Simulators for two feedback coding schemes whose final list sizes the
//! analytic rate bounds control, plus the zero-error pair code both build on.
//!
//! The three-phase scheme sends an ordinary block, lets the receiver form
//! the list of the `ell` most likely messages, then uses the zero pattern of
//! an input pair to confirm list membership and to point at the list
//! position. Confirmation can fail silently but never falsely: the receiver
//! only declares "on the list" after seeing an output that the alternative
//! input cannot produce.
//!
//! The type partition scheme sends a constant-composition block, groups the
//! messages that share the conditional type of the received block, splits
//! the group into a bounded number of sublists, and identifies the sublist
//! through a zero-error side channel; only the sublist containing the true
//! message survives.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{
    cal_positive, closest_type, conditional_type_of, enumerate_conditional_types,
    messages_in_shell, q_star, Dmc, Pmf,
};
use crate::gallager::maximize_e0;
use crate::numeric::KahanSum;
use crate::SolveError;

use super::code::Codebook;
use super::moments::sample_index;

/// Message-count cap for the scheme simulators (each trial scans the
/// codebook).
const MESSAGE_CAP: usize = 100_000;

/// Output-enumeration cap for the exact type-partition evaluation.
const ENUM_CAP: u128 = 1_000_000;

/// Inner accuracy for the input-distribution optimization behind codeword
/// draws.
const E0_TOL: f64 = 1e-9;
const E0_MAX_ITER: u64 = 400_000;

/// Returns the first pair of inputs (in lexicographic order) whose output
/// supports are disjoint, if any.
fn first_disjoint_pair(w: &Dmc) -> Option<(usize, usize)> {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    for a in 0..nx {
        for b in (a + 1)..nx {
            if (0..ny).all(|y| w.w(a, y) == 0.0 || w.w(b, y) == 0.0) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Builds the zero-error code of blocklength `k` over the first pair of
/// inputs with disjoint output supports: `2^k` messages, message bits mapped
/// most-significant-first to the pair. Every output block identifies the
/// message exactly because the two inputs are distinguishable coordinate by
/// coordinate. Returns `None` when no such pair exists (the zero-error
/// capacity is then zero).
///
/// Panics if `k` is zero or exceeds 20 (more than a million messages).
pub fn zero_error_pair_code(w: &Dmc, k: usize) -> Option<Codebook> {
    assert!(k >= 1 && k <= 20, "blocklength must be in 1..=20");
    let (x0, x1) = first_disjoint_pair(w)?;
    let mm = 1usize << k;
    let codewords = (0..mm)
        .map(|m| {
            (0..k)
                .map(|j| if (m >> (k - 1 - j)) & 1 == 1 { x1 } else { x0 })
                .collect()
        })
        .collect();
    Some(Codebook::new(codewords, w.num_inputs()).expect("pair code is well formed"))
}

/// Parameters of the three-phase list-confirmation scheme.
///
/// Phase 1 sends `n` channel uses at rate `rate` (the message count is
/// `max(1, round(exp(n * rate)))`); phase 2 spends `nprime` uses on the
/// confirmation signal; phase 3 spends `k * ell` uses pointing at one of the
/// `ell` list positions.
#[derive(Clone, Debug)]
pub struct ThreePhaseConfig {
    pub rho: f64,
    pub rate: f64,
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub nprime: usize,
    pub trials: u64,
    pub seed: u64,
    /// Input distribution for the phase-1 codeword draws; the E0-maximizing
    /// distribution at `rho` when absent.
    pub p: Option<Pmf>,
    /// Fixed phase-1 codebook; fresh independent draws per trial when
    /// absent.
    pub codebook: Option<Codebook>,
}

/// Outcome statistics of the three-phase scheme.
///
/// The three failure events partition as: `e1` (true message missing from
/// the phase-1 list, final list is the full message set), `e2` (on the list
/// but the confirmation signal went unseen, same fallback), `e3` (confirmed
/// but the position signal went unseen, final list is the phase-1 list).
/// Otherwise the final list is the single true message.
#[derive(Clone, Debug)]
pub struct ThreePhaseReport {
    pub rho: f64,
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub nprime: usize,
    pub num_messages: usize,
    /// Phase-1 rate `ln(M) / n`.
    pub rate_raw: f64,
    /// Rate after charging all three phases: `ln(M) / (n + nprime + k*ell)`.
    pub rate_effective: f64,
    /// The pairwise reach probability driving phases 2 and 3.
    pub q_star: f64,
    /// Empirical E[L^rho] of the final list size.
    pub moment: f64,
    pub std_error: Option<f64>,
    pub e1_freq: f64,
    pub e2_freq: f64,
    pub e3_freq: f64,
    /// Trials that reached phase 3 (confirmation seen).
    pub reached: u64,
    /// Phase-3 failure frequency among trials that reached it; its exact
    /// value is `(1 - q_star)^k` because the `k` position uses are drawn
    /// independently of everything before them.
    pub e3_conditional: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Simulates the three-phase list-confirmation scheme.
///
/// Each trial derives its RNG stream from `(seed, trial_index)` and, in
/// order: draws the phase-1 codebook (unless fixed), the message, the
/// phase-1 outputs, the phase-2 outputs, and the phase-3 outputs. All
/// channel uses are simulated even on paths where the transmitter only pads
/// with the silent input, so the stream layout does not depend on the
/// outcome path.
///
/// The receiver's phase-1 list holds the `ell` most likely messages, ties
/// resolved toward smaller message index. Phase 2 sends the reaching input
/// `x1` when the true message is on the list and the silent input `x0`
/// otherwise; the receiver declares confirmation only when some output lands
/// in the zero set of `x0`, which `x0` cannot produce. Phase 3 sends `ell`
/// disjoint bursts of `x1` of length `k` (one burst position per list
/// entry); a confirmed receiver pinpoints the list position from the burst
/// that shows a zero-set output.
pub fn simulate_three_phase_scheme(
    w: &Dmc,
    cfg: &ThreePhaseConfig,
) -> Result<ThreePhaseReport, SolveError> {
    if !(cfg.rho > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive, got {}",
            cfg.rho
        )));
    }
    if cfg.n == 0 || cfg.ell == 0 || cfg.k == 0 || cfg.nprime == 0 || cfg.trials == 0 {
        return Err(SolveError::InvalidArgument(
            "n, ell, k, nprime, and trials must all be positive".into(),
        ));
    }
    if !cal_positive(w) {
        return Err(SolveError::InvalidArgument(
            "the scheme needs an output that some input cannot produce".into(),
        ));
    }
    let witness = q_star(w);
    let mut y0_mask = vec![false; w.num_outputs()];
    for &y in &witness.y0 {
        y0_mask[y] = true;
    }
    let mm = match &cfg.codebook {
        Some(book) => {
            if book.n() != cfg.n {
                return Err(SolveError::InvalidArgument(format!(
                    "codebook blocklength {} does not match n = {}",
                    book.n(),
                    cfg.n
                )));
            }
            if book.num_inputs() > w.num_inputs() {
                return Err(SolveError::InvalidArgument(
                    "codebook alphabet exceeds the channel input count".into(),
                ));
            }
            book.num_messages()
        }
        None => {
            if !(cfg.rate > 0.0) {
                return Err(SolveError::InvalidArgument(format!(
                    "rate must be positive, got {}",
                    cfg.rate
                )));
            }
            ((cfg.n as f64 * cfg.rate).exp().round() as usize).max(1)
        }
    };
    if mm > MESSAGE_CAP {
        return Err(SolveError::SizeCap {
            size: mm as u128,
            cap: MESSAGE_CAP as u128,
        });
    }
    let p: Vec<f64> = match (&cfg.codebook, &cfg.p) {
        (Some(_), _) => Vec::new(),
        (None, Some(p)) => {
            if p.len() != w.num_inputs() {
                return Err(SolveError::InvalidArgument(
                    "input distribution length does not match the channel".into(),
                ));
            }
            p.to_vec()
        }
        (None, None) => maximize_e0(cfg.rho, w, E0_TOL, E0_MAX_ITER)?.p_star.to_vec(),
    };
    let ell = cfg.ell;
    let samples: Vec<[f64; 5]> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial);
            let drawn;
            let book = match &cfg.codebook {
                Some(book) => book,
                None => {
                    let codewords = (0..mm)
                        .map(|_| (0..cfg.n).map(|_| sample_index(&mut rng, &p)).collect())
                        .collect();
                    drawn = Codebook::new(codewords, w.num_inputs())
                        .expect("drawn codebook is well formed");
                    &drawn
                }
            };
            let m = rng.gen_range(0..mm);
            let y: Vec<usize> = book.codeword(m)
                .iter()
                .map(|&x| sample_index(&mut rng, w.row(x)))
                .collect();
            let lik: Vec<f64> = (0..mm).map(|mp| book.likelihood(w, mp, &y)).collect();
            let mut order: Vec<usize> = (0..mm).collect();
            order.sort_by(|&a, &b| lik[b].partial_cmp(&lik[a]).unwrap().then(a.cmp(&b)));
            let list = &order[..ell.min(mm)];
            let position = list.iter().position(|&mp| mp == m);
            let phase2_input = if position.is_some() {
                witness.x1
            } else {
                witness.x0
            };
            let mut confirmed = false;
            for _ in 0..cfg.nprime {
                if y0_mask[sample_index(&mut rng, w.row(phase2_input))] {
                    confirmed = true;
                }
            }
            let mut identified = false;
            for block in 0..ell {
                let x = match (confirmed, position) {
                    (true, Some(pos)) if block == pos => witness.x1,
                    _ => witness.x0,
                };
                for _ in 0..cfg.k {
                    if y0_mask[sample_index(&mut rng, w.row(x))] {
                        identified = true;
                    }
                }
            }
            let (final_len, e1, e2, e3, reached) = match (position, confirmed, identified) {
                (None, _, _) => (mm, 1.0, 0.0, 0.0, 0.0),
                (Some(_), false, _) => (mm, 0.0, 1.0, 0.0, 0.0),
                (Some(_), true, false) => (list.len(), 0.0, 0.0, 1.0, 1.0),
                (Some(_), true, true) => (1, 0.0, 0.0, 0.0, 1.0),
            };
            [(final_len as f64).powf(cfg.rho), e1, e2, e3, reached]
        })
        .collect();
    let sum = |idx: usize| {
        let mut acc = KahanSum::new();
        for s in &samples {
            acc.add(s[idx]);
        }
        acc.value()
    };
    let tf = cfg.trials as f64;
    let moment = sum(0) / tf;
    let std_error = if cfg.trials < 2 {
        None
    } else {
        let mut acc = KahanSum::new();
        for s in &samples {
            let d = s[0] - moment;
            acc.add(d * d);
        }
        Some((acc.value() / (tf * (tf - 1.0))).sqrt())
    };
    let e3_count = sum(3);
    let reached = sum(4);
    Ok(ThreePhaseReport {
        rho: cfg.rho,
        n: cfg.n,
        ell: cfg.ell,
        k: cfg.k,
        nprime: cfg.nprime,
        num_messages: mm,
        rate_raw: (mm as f64).ln() / cfg.n as f64,
        rate_effective: (mm as f64).ln() / (cfg.n + cfg.nprime + cfg.k * cfg.ell) as f64,
        q_star: witness.q_star,
        moment,
        std_error,
        e1_freq: sum(1) / tf,
        e2_freq: sum(2) / tf,
        e3_freq: e3_count / tf,
        reached: reached as u64,
        e3_conditional: if reached > 0.0 { e3_count / reached } else { 0.0 },
        trials: cfg.trials,
        seed: cfg.seed,
    })
}

/// Parameters of the constant-composition type partition scheme.
#[derive(Clone, Debug)]
pub struct TypeSchemeConfig {
    pub rho: f64,
    pub rate: f64,
    pub n: usize,
    /// Sublist-count exponent: the message group is split into
    /// `ceil(exp(n * alpha))` sublists.
    pub alpha: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Simulation output of the type partition scheme, carrying the codebook it
/// evaluated so exact re-evaluation can target the same draw.
#[derive(Clone, Debug)]
pub struct TypeSchemeReport {
    pub rho: f64,
    pub n: usize,
    pub alpha: f64,
    pub num_messages: usize,
    pub rate_raw: f64,
    /// Number of sublists `ceil(exp(n * alpha))` the message group is split
    /// into.
    pub num_sublists: usize,
    /// The disjoint-support input pair carrying the side information.
    pub pair: (usize, usize),
    /// The common composition of all codewords (counts per input letter).
    pub data_counts: Vec<u32>,
    /// Zero-error side-channel uses spent identifying the conditional type
    /// and the sublist index (one bit per use).
    pub overhead_uses: u32,
    /// Empirical E[L^rho] of the sublist containing the true message.
    pub moment: f64,
    pub std_error: Option<f64>,
    /// E[|group|^rho] for the message group sharing the received block's
    /// conditional type.
    pub shell_moment: f64,
    /// Whether `shell_moment` comes from exact enumeration (true) or from
    /// the same Monte-Carlo trials (false, output space too large).
    pub shell_moment_exact: bool,
    /// `1 + 2^rho * exp(-n*rho*alpha) * shell_moment`, an upper bound on the
    /// rho-th moment of the final list size since every sublist has length
    /// at most `ceil(exp(-n*alpha) * |group|)`.
    pub analytic_bound: f64,
    pub codebook: Codebook,
    pub trials: u64,
    pub seed: u64,
}

/// Exact per-codebook moments of the type partition scheme.
#[derive(Clone, Copy, Debug)]
pub struct TypeSchemeExact {
    /// E[L^rho] of the sublist containing the true message.
    pub list_moment: f64,
    /// E[|group|^rho] of the conditional-type message group.
    pub shell_moment: f64,
}

/// Simulates the type partition scheme with one codebook per run.
///
/// The data alphabet drops the reaching input of the first disjoint-support
/// pair (it is reserved for the zero-error side channel), the codeword
/// composition is the blocklength-`n` type closest to the E0-maximizing
/// distribution on the restricted channel, and all codewords are drawn
/// uniformly from that composition's sequence shell on RNG stream 0 of the
/// seed. Trial `t` then uses stream `t + 1` to draw the message and the
/// channel outputs.
///
/// The receiver groups the messages whose codewords stand in the received
/// block's conditional type, splits the group (message-ascending) into
/// `ceil(exp(n * alpha))` contiguous sublists of equal ceiling length, and
/// learns the conditional type and the sublist index through the zero-error
/// pair code; the reported overhead counts those side-channel uses. The
/// final list is the sublist containing the true message.
pub fn simulate_type_scheme(w: &Dmc, cfg: &TypeSchemeConfig) -> Result<TypeSchemeReport, SolveError> {
    if !(cfg.rho > 0.0) || !(cfg.alpha > 0.0) || !(cfg.rate > 0.0) {
        return Err(SolveError::InvalidArgument(
            "rho, rate, and alpha must be positive".into(),
        ));
    }
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(SolveError::InvalidArgument(
            "n and trials must be positive".into(),
        ));
    }
    let (x_keep, x_signal) = first_disjoint_pair(w).ok_or_else(|| {
        SolveError::InvalidArgument(
            "the scheme needs two inputs with disjoint output supports".into(),
        )
    })?;
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    // Data codewords avoid the signaling input; the optimization runs on the
    // channel restricted to the remaining inputs.
    let data_inputs: Vec<usize> = (0..nx).filter(|&x| x != x_signal).collect();
    let restricted = Dmc::from_rows(
        data_inputs
            .iter()
            .map(|&x| w.row(x).to_vec())
            .collect(),
    )?;
    let p_restricted = maximize_e0(cfg.rho, &restricted, E0_TOL, E0_MAX_ITER)?.p_star;
    let mut p_full = vec![0.0; nx];
    for (i, &x) in data_inputs.iter().enumerate() {
        p_full[x] = p_restricted[i];
    }
    let composition = closest_type(&p_full, cfg.n as u32);
    let canonical = composition.canonical_sequence();
    let mm = ((cfg.n as f64 * cfg.rate).exp().round() as usize).max(1);
    if mm > MESSAGE_CAP {
        return Err(SolveError::SizeCap {
            size: mm as u128,
            cap: MESSAGE_CAP as u128,
        });
    }
    let num_sublists = ((cfg.n as f64 * cfg.alpha).exp().ceil()).min(1e15) as usize;
    let num_v_types = enumerate_conditional_types(composition.counts(), ny, ENUM_CAP)?.len();
    let overhead_uses = ceil_log2(num_v_types) + ceil_log2(num_sublists);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let codewords: Vec<Vec<usize>> = (0..mm)
        .map(|_| {
            let mut cw = canonical.clone();
            cw.shuffle(&mut rng);
            cw
        })
        .collect();
    let book = Codebook::new(codewords, nx).expect("shell codebook is well formed");
    let samples: Vec<[f64; 2]> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial + 1);
            let m = rng.gen_range(0..mm);
            let y: Vec<usize> = book.codeword(m)
                .iter()
                .map(|&x| sample_index(&mut rng, w.row(x)))
                .collect();
            let (final_len, shell_len) = final_sublist_len(w, &book, m, &y, num_sublists);
            [
                (final_len as f64).powf(cfg.rho),
                (shell_len as f64).powf(cfg.rho),
            ]
        })
        .collect();
    let tf = cfg.trials as f64;
    let mut moment_acc = KahanSum::new();
    let mut shell_acc = KahanSum::new();
    for s in &samples {
        moment_acc.add(s[0]);
        shell_acc.add(s[1]);
    }
    let moment = moment_acc.value() / tf;
    let std_error = if cfg.trials < 2 {
        None
    } else {
        let mut acc = KahanSum::new();
        for s in &samples {
            let d = s[0] - moment;
            acc.add(d * d);
        }
        Some((acc.value() / (tf * (tf - 1.0))).sqrt())
    };
    let output_space = (ny as u128).checked_pow(cfg.n as u32).unwrap_or(u128::MAX);
    let (shell_moment, shell_moment_exact) = if output_space <= ENUM_CAP {
        (
            type_scheme_enumerate(w, &book, cfg.rho, num_sublists)?.shell_moment,
            true,
        )
    } else {
        (shell_acc.value() / tf, false)
    };
    let analytic_bound = 1.0
        + 2f64.powf(cfg.rho) * (-(cfg.n as f64) * cfg.rho * cfg.alpha).exp() * shell_moment;
    Ok(TypeSchemeReport {
        rho: cfg.rho,
        n: cfg.n,
        alpha: cfg.alpha,
        num_messages: mm,
        rate_raw: (mm as f64).ln() / cfg.n as f64,
        num_sublists,
        pair: (x_keep, x_signal),
        data_counts: composition.counts().to_vec(),
        overhead_uses,
        moment,
        std_error,
        shell_moment,
        shell_moment_exact,
        analytic_bound,
        codebook: book,
        trials: cfg.trials,
        seed: cfg.seed,
    })
}

/// Exact type-partition moments for a fixed codebook by enumeration of all
/// output blocks; the partition rule matches `simulate_type_scheme`.
pub fn type_scheme_exact_moment(
    w: &Dmc,
    book: &Codebook,
    rho: f64,
    alpha: f64,
) -> Result<TypeSchemeExact, SolveError> {
    if !(rho > 0.0) || !(alpha > 0.0) {
        return Err(SolveError::InvalidArgument(
            "rho and alpha must be positive".into(),
        ));
    }
    let num_sublists = ((book.n() as f64 * alpha).exp().ceil()).min(1e15) as usize;
    type_scheme_enumerate(w, book, rho, num_sublists)
}

/// Sublist length for message `m` at output `y`, plus the size of the whole
/// conditional-type group: the group is split message-ascending into
/// `num_sublists` contiguous blocks of ceiling length.
fn final_sublist_len(
    w: &Dmc,
    book: &Codebook,
    m: usize,
    y: &[usize],
    num_sublists: usize,
) -> (usize, usize) {
    let v = conditional_type_of(book.codeword(m), y, w.num_inputs(), w.num_outputs());
    let shell = messages_in_shell(book.codewords(), y, &v, w.num_inputs(), w.num_outputs());
    let size = shell.len();
    let block_len = size.div_ceil(num_sublists);
    let position = shell
        .iter()
        .position(|&mp| mp == m)
        .expect("the true message shares its own conditional type");
    let block = position / block_len;
    (block_len.min(size - block * block_len), size)
}

fn type_scheme_enumerate(
    w: &Dmc,
    book: &Codebook,
    rho: f64,
    num_sublists: usize,
) -> Result<TypeSchemeExact, SolveError> {
    let ny = w.num_outputs();
    let n = book.n();
    let total = (ny as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > ENUM_CAP {
        return Err(SolveError::SizeCap {
            size: total,
            cap: ENUM_CAP,
        });
    }
    let mm = book.num_messages();
    let weight = 1.0 / mm as f64;
    let mut list_moment = KahanSum::new();
    let mut shell_moment = KahanSum::new();
    for m in 0..mm {
        let mut y = vec![0usize; n];
        loop {
            let p = book.likelihood(w, m, &y);
            if p > 0.0 {
                let (final_len, shell_len) = final_sublist_len(w, book, m, &y, num_sublists);
                list_moment.add(weight * p * (final_len as f64).powf(rho));
                shell_moment.add(weight * p * (shell_len as f64).powf(rho));
            }
            if !advance(&mut y, ny) {
                break;
            }
        }
    }
    Ok(TypeSchemeExact {
        list_moment: list_moment.value(),
        shell_moment: shell_moment.value(),
    })
}

/// Exact integer ceiling of log2, with `ceil_log2(0) = ceil_log2(1) = 0`.
fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        (x - 1).ilog2() + 1
    }
}

/// Advances `y` through the mixed-radix odometer; returns false after the
/// last block.
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
