use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("expected {expected} modes, space has {found}")]
    ModeCount { expected: usize, found: usize },
    #[error("fock space dimension {dim} exceeds bound {bound}")]
    Resource { dim: usize, bound: usize },
    #[error("states or operators belong to different spaces")]
    SpaceMismatch,
    #[error("truncation tail {tail:.3e} exceeds tolerance {tolerance:.3e}")]
    TailBudget { tail: f64, tolerance: f64 },
    #[error("grade {needed} exceeds cutoff {cutoff}")]
    CutoffExceeded { needed: usize, cutoff: usize },
    #[error("invalid weight (2I={i2}, 2M={m2}, 3Y={y3}) for irrep ({p},{q})")]
    InvalidWeight { p: u32, q: u32, i2: i32, m2: i32, y3: i32 },
    #[error("chart singular: |eta_1| = {0}")]
    ChartSingular(f64),
    #[error("state is not in the null space of K-: residual {0:.3e}")]
    NotInNullSpace(f64),
    #[error("orbit class {0} has no expansion")]
    TrivialOrbit(char),
}

pub type Result<T> = std::result::Result<T, Error>;
