//! Capacity-style quantities of a channel: Shannon capacity via alternating
//! maximization, the minimax zero-set value pi0 as a linear program, the
//! minimum capacity over dominated subchannels, exact binary-input listsize
//! and erasure-only capacities, and the assembled feedback capacity report.

mod binary;
mod lp;
mod minvc;
mod pi0;
mod report;
mod shannon;

pub use binary::{binary_input_exact, BinaryInputExact};
pub use lp::{solve_lp, Constraint, Lp, LpError, LpRow, LpSolution};
pub use minvc::{min_capacity_subchannels, MinCapacityResult};
pub use pi0::{pi0, pi0_grid_search, Pi0Result};
pub use report::{feedback_capacity_report, CapacityReport};
pub use shannon::{shannon_capacity, ShannonCapacity};
