//! Numerics for the six-oscillator Schwinger realization of SU(3): truncated
//! Fock spaces, Lie-algebra generators, group actions, labeled basis states,
//! coherent-state expansions and frame-operator decompositions.

pub mod algebra;
pub mod basis;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod groups;
pub mod mc;
pub mod quad;
pub mod resolutions;
pub mod specfun;

pub use error::{Error, Result};
