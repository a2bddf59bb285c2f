//! Capacity-style quantities of discrete memoryless channels.
//!
//! The crate computes and cross-validates a family of channel quantities that
//! all arise from list decoding and erasure decoding:
//!
//! * Shannon capacity `C` via Blahut-Arimoto,
//! * Gallager's exponent `E0(rho, P)` and the cutoff-style rate
//!   `max_P E0(rho, P)/rho`,
//! * the zero-error capacity with feedback through the min-max reach
//!   probability `pi0`,
//! * lower and upper bounds on the list-size capacity `Cal` and the
//!   zero-undetected-error capacity `Ceo` (Forney-style decision regions,
//!   constant-composition converses, n-letter evaluations),
//! * feedback variants of all of the above, and
//! * Monte-Carlo and exhaustive simulations of concrete list-decoding schemes
//!   whose list-size moments the analytic quantities bound.
//!
//! All rates and information quantities are in nats unless a function name
//! says otherwise. Probabilities are `f64`; a matrix entry that is exactly
//! `0.0` is a structural zero (the transition is impossible, not merely
//! improbable), and every algorithm in the crate preserves that distinction.
//!
//! Randomized routines take explicit `u64` seeds and are deterministic for a
//! fixed seed, independent of thread count.

pub mod bounds;
pub mod capacity;
pub mod channel;
pub mod gallager;
pub mod listsim;
pub mod numeric;

pub use channel::{ChannelError, Dmc, Pmf};

/// Error type shared by the iterative solvers in the crate.
///
/// `NonConvergence` carries the best residual reached so callers can decide
/// whether a near-miss is acceptable; the CLI maps it to a dedicated exit
/// code.
#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("solver stopped at residual {residual:.3e} (tolerance {tol:.3e}) after {iterations} iterations")]
    NonConvergence {
        residual: f64,
        tol: f64,
        iterations: u64,
    },
    #[error("problem size {size} exceeds the cap of {cap}")]
    SizeCap { size: u128, cap: u128 },
    #[error("infeasible problem: {0}")]
    Infeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}
