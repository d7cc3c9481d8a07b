//! Stringy Euler numbers and E-functions.

pub mod chain;
pub mod complete;
pub mod germ;
pub mod invariance;

pub use chain::{
    chain_contribution, chain_direct_sum, chain_dr, chain_dr_matrix, check_chain_identities,
    check_nonnegativity, euler_chain_contribution, find_maximal_chains, ChainContext, MaximalChain,
};
pub use complete::{check_duality, e_at_zero, stringy_complete_surface, CompleteSurface};
pub use germ::{stringy_e_function_germ, stringy_euler_germ, HodgeCurveData};
pub use invariance::{check_blowup_invariance, InvarianceReport};
