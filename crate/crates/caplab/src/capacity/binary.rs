//! Exact listsize and erasure-only capacities for binary-input channels:
//! merge equivalent outputs, check the merged channel is acyclic, and read
//! the capacities off the cutoff rate and the Shannon capacity.

use super::shannon::shannon_capacity;
use crate::channel::{merge_equivalent_outputs, supports_and_graph, ChannelError, Dmc};
use crate::gallager::maximize_e0;
use crate::SolveError;

/// Exact capacities of a binary-input channel at a fixed rho.
#[derive(Clone, Debug)]
pub struct BinaryInputExact {
    /// Listsize capacity, equal to the cutoff rate of the merged channel.
    pub cal: f64,
    /// Erasure-only capacity, equal to the Shannon capacity of the merged
    /// channel.
    pub ceo: f64,
    /// The merged channel both values refer to.
    pub reduced: Dmc,
    /// Output groups merged into each reduced output.
    pub groups: Vec<Vec<usize>>,
    pub rho: f64,
}

/// Computes the exact (cal, ceo) pair for a two-input channel by reducing
/// to the merged channel, verifying it is acyclic, and evaluating the
/// cutoff rate and capacity there.
pub fn binary_input_exact(
    w: &Dmc,
    rho: f64,
    tol: f64,
) -> Result<BinaryInputExact, SolveError> {
    if w.num_inputs() != 2 {
        return Err(SolveError::Channel(ChannelError::BinaryInputRequired {
            inputs: w.num_inputs(),
        }));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    let merged = merge_equivalent_outputs(w);
    let graph = supports_and_graph(&merged.channel);
    if !graph.acyclic {
        // Merging leaves at most one output reachable from both inputs, so
        // a cycle cannot survive; reaching this branch means the reduction
        // itself is broken.
        return Err(SolveError::InvalidArgument(
            "merged binary-input channel is not acyclic".to_string(),
        ));
    }
    let solver_tol = tol.min(1e-9);
    let e0 = maximize_e0(rho, &merged.channel, solver_tol, 400_000)?;
    let cap = shannon_capacity(&merged.channel, solver_tol.min(1e-10), 1_000_000)?;
    Ok(BinaryInputExact {
        cal: e0.cutoff_rate,
        ceo: cap.capacity,
        reduced: merged.channel,
        groups: merged.groups,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    #[test]
    fn erasure_channel_matches_closed_forms() {
        for delta in [0.1, 0.5, 0.9] {
            let r = binary_input_exact(&fixtures::binary_erasure(delta), 1.0, 1e-9)
                .unwrap();
            let ceo_expected = (1.0 - delta) * std::f64::consts::LN_2;
            let cal_expected = -((1.0 + delta) / 2.0).ln();
            assert!((r.ceo - ceo_expected).abs() < 1e-9);
            assert!((r.cal - cal_expected).abs() < 1e-9);
        }
    }

    #[test]
    fn noiseless_binary_gives_log_two_twice() {
        let r = binary_input_exact(&fixtures::noiseless(2), 1.0, 1e-9).unwrap();
        assert!((r.cal - std::f64::consts::LN_2).abs() < 1e-9);
        assert!((r.ceo - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn z_channel_with_zero_crossover_is_noiseless() {
        let r = binary_input_exact(&fixtures::z_channel(0.0), 1.0, 1e-9).unwrap();
        assert!((r.cal - std::f64::consts::LN_2).abs() < 1e-9);
        assert!((r.ceo - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn three_input_channel_is_rejected() {
        let err = binary_input_exact(&fixtures::noiseless(3), 1.0, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            SolveError::Channel(ChannelError::BinaryInputRequired { inputs: 3 })
        ));
    }

    #[test]
    fn cal_never_exceeds_ceo_on_random_binary_channels() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let w = fixtures::random_sparse(&mut rng, 2, 4, 0.6);
            let r = binary_input_exact(&w, 1.0, 1e-9).unwrap();
            assert!(r.cal <= r.ceo + 1e-8, "cal {} ceo {}", r.cal, r.ceo);
            assert!(r.groups.iter().map(|g| g.len()).sum::<usize>() == 4);
        }
    }
}
