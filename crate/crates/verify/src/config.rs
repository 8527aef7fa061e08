//! Run configuration shared by every suite.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Lowdim,
    Orbits,
    H0,
    Kappa,
    ClassE,
    Appendix,
    Induced,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Algebra,
        Suite::Lowdim,
        Suite::Orbits,
        Suite::H0,
        Suite::Kappa,
        Suite::ClassE,
        Suite::Appendix,
        Suite::Induced,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Lowdim => "lowdim",
            Suite::Orbits => "orbits",
            Suite::H0 => "h0",
            Suite::Kappa => "kappa",
            Suite::ClassE => "class-e",
            Suite::Appendix => "appendix",
            Suite::Induced => "induced",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl Selection {
    pub fn suites(&self) -> Vec<Suite> {
        match self {
            Selection::One(s) => vec![*s],
            Selection::All => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(Selection::One)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite '{s}', expected one of {} or all", names.join(", "))
            })
    }
}

/// Upper bound on the six-mode cutoff accepted from the command line.
pub const MAX_CUTOFF: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    /// Six-mode cutoff Λ; `None` lets every check use its own default.
    pub cutoff: Option<usize>,
    /// Largest p + q in SU(3) tables; `None` lets every check use its own default.
    pub p_max: Option<u32>,
    pub samples: usize,
    pub seed: u64,
    /// Multiplies every deterministic tolerance and the 5σ Monte Carlo threshold.
    pub tol_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { suites: Suite::ALL.to_vec(), cutoff: None, p_max: None, samples: 50_000, seed: 42, tol_scale: 1.0 }
    }
}

impl RunConfig {
    pub fn for_suite(suite: Suite) -> RunConfig {
        RunConfig { suites: vec![suite], ..RunConfig::default() }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.suites.is_empty() {
            return Err("no suite selected".into());
        }
        if let Some(c) = self.cutoff {
            if c == 0 || c > MAX_CUTOFF {
                return Err(format!("cutoff must lie in 1..={MAX_CUTOFF}, got {c}"));
            }
        }
        if let Some(p) = self.p_max {
            if p as usize > MAX_CUTOFF {
                return Err(format!("pmax must be at most {MAX_CUTOFF}, got {p}"));
            }
        }
        if self.samples < 2 {
            return Err(format!("samples must be at least 2, got {}", self.samples));
        }
        if !(self.tol_scale.is_finite() && self.tol_scale > 0.0) {
            return Err(format!("tol-scale must be positive, got {}", self.tol_scale));
        }
        Ok(())
    }
}
