//! Discrete memoryless channels: representation, validation, structural
//! analysis, and the standard reductions that preserve the capacities this
//! crate computes.

mod dmc;
pub mod fixtures;
mod functionals;
mod graph;
mod product;
mod reduce;
mod types;
mod zero;

pub use dmc::{load_channel, ChannelError, Dmc, Pmf};
pub use fixtures::{
    binary_erasure, binary_symmetric, eps_noise3, fig1, fig2, from_spec, noiseless, random_dense,
    random_sparse, z_channel,
};
pub use functionals::{
    conditional_divergence, conditional_entropy, entropy, info_functionals, kl_divergence,
    mutual_information, InfoFunctionals,
};
pub use graph::{supports_and_graph, ChannelGraph};
pub use product::{decode_tuple, product_channel};
pub use reduce::{
    binary_input_reduce, check_factorization, merge_equivalent_outputs, Factorization, MergeResult,
};
pub use types::{
    closest_type, compositions, conditional_shell_size, conditional_type_of,
    enumerate_conditional_types, messages_in_shell, multinomial, shell_size, type_of,
    ConditionalType, TypeClass,
};
pub use zero::{ambiguous_output_upper_bound, cal_positive, czero_positive, q_star, QStarWitness};
