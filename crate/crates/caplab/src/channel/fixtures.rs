//! Named example channels and seeded random channel generators.
//!
//! The two figure channels are the recurring counterexamples of the crate:
//! `fig1` is a BSC glued to a noiseless third symbol (positive zero-error
//! capacity, so the feedback list capacity equals the cutoff-style rate), and
//! `fig2` is a BSC plus a third input that only rarely reveals itself
//! (positive list capacity but a feedback list capacity pinned near zero by
//! the ambiguous-output bound).

use rand::Rng;

use super::dmc::{ChannelError, Dmc};

/// BSC(eps) on inputs {0,1} plus a separate noiseless symbol 2.
pub fn fig1(eps: f64) -> Dmc {
    assert!((0.0..=0.5).contains(&eps));
    Dmc::from_rows(vec![
        vec![1.0 - eps, eps, 0.0],
        vec![eps, 1.0 - eps, 0.0],
        vec![0.0, 0.0, 1.0],
    ])
    .expect("fig1 matrix is stochastic")
}

/// BSC(eps) on inputs {0,1}; input 2 reaches output 2 with probability delta
/// and otherwise lands uniformly on outputs {0,1}.
pub fn fig2(eps: f64, delta: f64) -> Dmc {
    assert!((0.0..=0.5).contains(&eps));
    assert!((0.0..=1.0).contains(&delta));
    let half = (1.0 - delta) / 2.0;
    Dmc::from_rows(vec![
        vec![1.0 - eps, eps, 0.0],
        vec![eps, 1.0 - eps, 0.0],
        vec![half, half, delta],
    ])
    .expect("fig2 matrix is stochastic")
}

/// Binary symmetric channel with crossover probability `p`.
pub fn binary_symmetric(p: f64) -> Dmc {
    assert!((0.0..=1.0).contains(&p));
    Dmc::from_rows(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).expect("bsc matrix is stochastic")
}

/// Binary erasure channel with erasure probability `delta`; outputs are
/// labeled {0, e, 1}.
pub fn binary_erasure(delta: f64) -> Dmc {
    assert!((0.0..=1.0).contains(&delta));
    Dmc::new(
        vec!["0".into(), "1".into()],
        vec!["0".into(), "e".into(), "1".into()],
        vec![
            vec![1.0 - delta, delta, 0.0],
            vec![0.0, delta, 1.0 - delta],
        ],
    )
    .expect("bec matrix is stochastic")
}

/// Z-channel: input 0 is noiseless, input 1 flips to output 0 with
/// probability `q`.
pub fn z_channel(q: f64) -> Dmc {
    assert!((0.0..=1.0).contains(&q));
    Dmc::from_rows(vec![vec![1.0, 0.0], vec![q, 1.0 - q]]).expect("z matrix is stochastic")
}

/// Noiseless k-ary channel (identity matrix).
pub fn noiseless(k: usize) -> Dmc {
    assert!(k > 0);
    let rows = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Dmc::from_rows(rows).expect("identity matrix is stochastic")
}

/// Ternary channel with exactly one structural zero: input 0 never produces
/// output 1, and every diagonal entry is 1 - eps.
///
/// For small eps this is nearly noiseless (capacity near ln 3) while the
/// single zero keeps the list-size positivity predicate true, which makes the
/// channel the standard stress case for the feedback lower bound.
pub fn eps_noise3(eps: f64) -> Dmc {
    assert!((0.0..0.5).contains(&eps) || eps == 0.0);
    Dmc::from_rows(vec![
        vec![1.0 - eps, 0.0, eps],
        vec![eps / 2.0, 1.0 - eps, eps / 2.0],
        vec![eps / 2.0, eps / 2.0, 1.0 - eps],
    ])
    .expect("eps_noise3 matrix is stochastic")
}

/// Random channel with all entries strictly positive: each row is a simplex
/// draw floored at `min_entry` and renormalized.
pub fn random_dense<R: Rng>(rng: &mut R, nx: usize, ny: usize, min_entry: f64) -> Dmc {
    assert!(min_entry * ny as f64 <= 1.0, "floor too large for row length");
    let rows = (0..nx)
        .map(|_| {
            let mut row = crate::numeric::random_simplex_point(rng, ny);
            row.iter_mut().for_each(|w| *w = w.max(min_entry));
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|w| *w /= s);
            row
        })
        .collect();
    Dmc::from_rows(rows).expect("generated rows are stochastic")
}

/// Random channel with structural zeros: each entry survives with probability
/// `keep` (at least one per row; columns that end up empty are revived with a
/// single entry so no output is unreachable).
pub fn random_sparse<R: Rng>(rng: &mut R, nx: usize, ny: usize, keep: f64) -> Dmc {
    assert!((0.0..=1.0).contains(&keep));
    loop {
        let mut mask = vec![vec![false; ny]; nx];
        for row in mask.iter_mut() {
            for cell in row.iter_mut() {
                *cell = rng.gen::<f64>() < keep;
            }
            if !row.iter().any(|&b| b) {
                row[rng.gen_range(0..ny)] = true;
            }
        }
        for y in 0..ny {
            if !mask.iter().any(|row| row[y]) {
                mask[rng.gen_range(0..nx)][y] = true;
            }
        }
        let rows: Vec<Vec<f64>> = mask
            .iter()
            .map(|mrow| {
                let k = mrow.iter().filter(|&&b| b).count();
                let positives = crate::numeric::random_simplex_point(rng, k);
                let mut it = positives.into_iter();
                mrow.iter()
                    .map(|&b| if b { it.next().unwrap() } else { 0.0 })
                    .collect()
            })
            .collect();
        match Dmc::from_rows(rows) {
            Ok(w) => return w,
            // A simplex draw can produce an entry below the subnormal floor;
            // extremely rare, just redraw.
            Err(_) => continue,
        }
    }
}

/// Parses a fixture string such as `fig1:0.1`, `fig2:0.01,0.05`, `bsc:0.1`,
/// `bec:0.5`, `z:0.3`, `noiseless:4`, or `eps3:0.001`.
pub fn from_spec(spec: &str) -> Result<Dmc, ChannelError> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, a),
        None => (spec, ""),
    };
    let nums: Result<Vec<f64>, _> = if args.is_empty() {
        Ok(Vec::new())
    } else {
        args.split(',').map(|s| s.trim().parse::<f64>()).collect()
    };
    let nums = nums.map_err(|e| ChannelError::Parse(format!("fixture {spec:?}: {e}")))?;
    let wrong_arity = |want: usize| {
        ChannelError::Parse(format!(
            "fixture {name:?} takes {want} parameter(s), got {}",
            nums.len()
        ))
    };
    let check_prob = |v: f64, lo: f64, hi: f64| {
        if (lo..=hi).contains(&v) {
            Ok(v)
        } else {
            Err(ChannelError::Parse(format!(
                "fixture {spec:?}: parameter {v} outside [{lo}, {hi}]"
            )))
        }
    };
    match name {
        "fig1" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(fig1(check_prob(nums[0], 0.0, 0.5)?))
        }
        "fig2" => {
            if nums.len() != 2 {
                return Err(wrong_arity(2));
            }
            Ok(fig2(
                check_prob(nums[0], 0.0, 0.5)?,
                check_prob(nums[1], 0.0, 1.0)?,
            ))
        }
        "bsc" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(binary_symmetric(check_prob(nums[0], 0.0, 1.0)?))
        }
        "bec" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(binary_erasure(check_prob(nums[0], 0.0, 1.0)?))
        }
        "z" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(z_channel(check_prob(nums[0], 0.0, 1.0)?))
        }
        "noiseless" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            let k = nums[0];
            if k < 1.0 || k.fract() != 0.0 || k > 64.0 {
                return Err(ChannelError::Parse(format!(
                    "fixture {spec:?}: alphabet size must be an integer in [1, 64]"
                )));
            }
            Ok(noiseless(k as usize))
        }
        "eps3" => {
            if nums.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(eps_noise3(check_prob(nums[0], 0.0, 0.49)?))
        }
        _ => Err(ChannelError::Parse(format!("unknown fixture {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fig1_matches_published_matrix() {
        let w = fig1(0.1);
        assert_eq!(w.row(0), &[0.9, 0.1, 0.0]);
        assert_eq!(w.row(1), &[0.1, 0.9, 0.0]);
        assert_eq!(w.row(2), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn fig2_third_input_splits_mass() {
        let w = fig2(0.01, 0.05);
        assert!((w.w(2, 0) - 0.475).abs() < 1e-15);
        assert!((w.w(2, 1) - 0.475).abs() < 1e-15);
        assert!((w.w(2, 2) - 0.05).abs() < 1e-15);
        assert_eq!(w.w(0, 2), 0.0);
    }

    #[test]
    fn eps_noise3_has_exactly_one_structural_zero() {
        let w = eps_noise3(0.001);
        let zeros: usize = w
            .rows()
            .iter()
            .map(|r| r.iter().filter(|&&v| v == 0.0).count())
            .sum();
        assert_eq!(zeros, 1);
        assert_eq!(w.w(0, 1), 0.0);
    }

    #[test]
    fn spec_strings_round_trip() {
        assert_eq!(from_spec("fig1:0.1").unwrap(), fig1(0.1));
        assert_eq!(from_spec("fig2:0.01,0.05").unwrap(), fig2(0.01, 0.05));
        assert_eq!(from_spec("bsc:0.2").unwrap(), binary_symmetric(0.2));
        assert_eq!(from_spec("noiseless:4").unwrap(), noiseless(4));
        assert_eq!(from_spec("eps3:0.01").unwrap(), eps_noise3(0.01));
        assert!(from_spec("fig1").is_err());
        assert!(from_spec("fig1:0.7").is_err());
        assert!(from_spec("mystery:1").is_err());
        assert!(from_spec("noiseless:2.5").is_err());
    }

    #[test]
    fn random_dense_respects_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = random_dense(&mut rng, 4, 5, 0.05);
            for x in 0..4 {
                for y in 0..5 {
                    assert!(w.w(x, y) >= 0.04, "floor violated: {}", w.w(x, y));
                }
            }
        }
    }

    #[test]
    fn random_sparse_never_leaves_empty_rows_or_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let w = random_sparse(&mut rng, 3, 4, 0.3);
            for x in 0..3 {
                assert!(!w.input_support(x).is_empty());
            }
            for y in 0..4 {
                assert!(!w.output_support(y).is_empty());
            }
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = random_dense(&mut ChaCha8Rng::seed_from_u64(9), 3, 3, 0.05);
        let b = random_dense(&mut ChaCha8Rng::seed_from_u64(9), 3, 3, 0.05);
        assert_eq!(a, b);
    }
}
