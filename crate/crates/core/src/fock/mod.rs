//! Truncated occupation-number spaces for 1, 2 and 6 bosonic modes, sparse
//! ladder operators, state vectors and truncated coherent states.

mod operator;
mod space;
mod state;

pub use operator::{bilinear, ladder, pair_creation, Ladder, LinearOperator};
pub use space::{build_space, build_space_bounded, FockSpace, Occupation, DEFAULT_MAX_DIM, MAX_MODES};
pub use state::{
    coherent_overlap, coherent_state, infidelity, inner, poisson_tail, CoherentAmplitudes, SparseState, StateVector, Truncated,
};
