//! The graph side: vertex Lagrangians contracted with the `q`-expanded
//! propagator.

mod commutator;
mod feynman;
mod kernel;

pub use commutator::{bracket, commutator_bracket};
pub use feynman::{
    bcov_connected_series, bcov_correlator, bcov_correlator_with, bcov_disconnected, contraction_schemes,
    evaluate_scheme_brute, ContractionScheme, FlowVector, Slot,
};
pub use kernel::{
    kernel_coeff, propagator_identity_check, propagator_mismatches, self_constant, self_kernel,
    self_loop_identity_check, KernelTable,
};
