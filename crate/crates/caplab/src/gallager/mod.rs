//! Gallager's exponent function E0, its maximization over input
//! distributions with global optimality certificates, Renyi-entropy
//! identities, small/large-rho limit diagnostics, and the guessing-moment
//! inequality check.

mod arikan;
mod e0;
mod limits;
mod renyi;

pub use arikan::{arikan_bound_check, likelihood_order_table, ArikanCheck};
pub use e0::{e0, kkt_residual, maximize_e0, E0Result};
pub use limits::{e0_limit_diagnostics, E0LimitDiagnostics, E0LimitRow};
pub use renyi::{maximize_renyi_difference, renyi_report, RenyiReport};
