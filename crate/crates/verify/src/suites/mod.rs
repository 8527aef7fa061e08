//! One module per suite. Every suite builds its own spaces and states, so any
//! suite runs standalone.

mod algebra;
mod appendix;
mod class_e;
mod h0;
mod induced;
mod kappa;
mod lowdim;
mod orbits;

use schwinger::fock::{infidelity, StateVector};
use schwinger::Result;

use crate::config::{RunConfig, Suite};
use crate::record::{CheckRecord, Ctx};

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Vec<CheckRecord> {
    let mut ctx = Ctx::new(cfg, suite);
    match suite {
        Suite::Algebra => algebra::run(&mut ctx),
        Suite::Lowdim => lowdim::run(&mut ctx),
        Suite::Orbits => orbits::run(&mut ctx),
        Suite::H0 => h0::run(&mut ctx),
        Suite::Kappa => kappa::run(&mut ctx),
        Suite::ClassE => class_e::run(&mut ctx),
        Suite::Appendix => appendix::run(&mut ctx),
        Suite::Induced => induced::run(&mut ctx),
    }
    ctx.finish()
}

/// Infidelity between two unnormalized vectors, clamped at zero.
fn infidelity_of(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(infidelity(a, b)?.max(0.0))
}
