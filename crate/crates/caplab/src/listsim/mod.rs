//! List-decoding simulation: exact and Monte-Carlo evaluation of list-size
//! moments for explicit codes, simulators for two feedback coding schemes,
//! and binomial-moment bounds with a brute-force oracle.
//!
//! The central objects are the two decoding lists attached to a code and a
//! received block `y`:
//!
//! * `L(y)`, the erasure-decoder list of all messages whose codeword could
//!   have produced `y` (positive likelihood), and
//! * `L(m, y)`, the list of all messages at least as likely as message `m`,
//!   ties included.
//!
//! Their rho-th moments under a uniform message are the finite-blocklength
//! quantities that the analytic rates elsewhere in the crate bound. This
//! module evaluates the moments exactly by output enumeration when the
//! output space is small, estimates them by Monte Carlo otherwise, and
//! simulates two feedback strategies whose list sizes the bounds control: a
//! three-phase list-confirmation scheme and a constant-composition type
//! partition scheme.
//!
//! Likelihood zeros are structural: a moment or a list membership never
//! depends on comparing a probability against a threshold, only on exact
//! `0.0` entries of the channel matrix. Monte-Carlo routines derive one RNG
//! stream per trial from `(seed, trial_index)`, so every estimate is
//! bit-reproducible and independent of thread count.

mod binomial;
mod code;
mod moments;
mod schemes;

pub use binomial::{binomial_gamma, binomial_moment_bound, binomial_moment_oracle, BinomialVariant};
pub use code::{list_sets, Code, Codebook, FeedbackStrategy};
pub use moments::{exact_moments, markov_list_bound, mc_moments, MomentMethod, MomentReport};
pub use schemes::{
    simulate_three_phase_scheme, simulate_type_scheme, type_scheme_exact_moment,
    zero_error_pair_code, ThreePhaseConfig, ThreePhaseReport, TypeSchemeConfig, TypeSchemeExact,
    TypeSchemeReport,
};
