//! Check records and the per-suite context that produces them.

use std::time::{Duration, Instant};

use schwinger::mc::McEstimate;
use schwinger::Error;
use serde::Serialize;

use crate::catalog;
use crate::config::{RunConfig, Suite};

/// Number of standard errors a Monte Carlo estimate may deviate before tol-scale.
pub const MC_SIGMAS: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub id: String,
    pub anchor: &'static str,
    pub status: Status,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
    /// Wall time since the previous record of the suite; reported in the header only.
    #[serde(skip)]
    pub runtime: Duration,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Check group: the id up to the first '/'.
    pub fn group(&self) -> &str {
        self.id.split('/').next().unwrap_or(&self.id)
    }
}

/// Collects the records of one suite run.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    suite: Suite,
    records: Vec<CheckRecord>,
    mark: Instant,
}

struct Outcome {
    measured: f64,
    expected: f64,
    tolerance: f64,
    error_bar: Option<f64>,
    passed: bool,
    note: Option<String>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a RunConfig, suite: Suite) -> Ctx<'a> {
        Ctx { cfg, suite, records: Vec::new(), mark: Instant::now() }
    }

    pub fn cutoff(&self, default: usize) -> usize {
        self.cfg.cutoff.unwrap_or(default)
    }

    pub fn p_max(&self, default: u32) -> u32 {
        self.cfg.p_max.unwrap_or(default)
    }

    pub fn samples(&self) -> usize {
        self.cfg.samples
    }

    /// Seed for one check group, independent of which other suites run.
    pub fn seed(&self, group: &str) -> u64 {
        // FNV-1a over "suite/group", mixed with the configured seed
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.suite.name().bytes().chain(*b"/").chain(group.bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^ self.cfg.seed
    }

    fn push(&mut self, group: &str, detail: &str, o: Outcome) {
        let anchor = catalog::anchor(self.suite, group)
            .unwrap_or_else(|| panic!("check group {}/{group} missing from the catalog", self.suite));
        let id = if detail.is_empty() { group.to_string() } else { format!("{group}/{detail}") };
        let diagnostics = if o.passed {
            o.note
        } else {
            let dev = (o.measured - o.expected).abs();
            let base = format!("deviation {dev:.3e} exceeds tolerance {:.3e}", o.tolerance);
            Some(match o.note {
                Some(n) => format!("{base}; {n}"),
                None => base,
            })
        };
        let now = Instant::now();
        self.records.push(CheckRecord {
            suite: self.suite,
            id,
            anchor,
            status: if o.passed { Status::Pass } else { Status::Fail },
            measured: o.measured,
            expected: o.expected,
            tolerance: o.tolerance,
            error_bar: o.error_bar,
            diagnostics,
            runtime: now - self.mark,
        });
        self.mark = now;
    }

    /// |measured − expected| ≤ tol · tol_scale.
    pub fn close(&mut self, group: &str, detail: &str, measured: f64, expected: f64, tol: f64) {
        let tolerance = tol * self.cfg.tol_scale;
        let passed = (measured - expected).abs() <= tolerance;
        self.push(group, detail, Outcome { measured, expected, tolerance, error_bar: None, passed, note: None });
    }

    /// A nonnegative residual that must stay below tol · tol_scale.
    pub fn bound(&mut self, group: &str, detail: &str, residual: f64, tol: f64) {
        self.close(group, detail, residual, 0.0, tol);
    }

    /// Exact equality of integer-valued quantities.
    pub fn exact(&mut self, group: &str, detail: &str, measured: i128, expected: i128) {
        let o = Outcome {
            measured: measured as f64,
            expected: expected as f64,
            tolerance: 0.0,
            error_bar: None,
            passed: measured == expected,
            note: (measured != expected).then(|| format!("{measured} != {expected}")),
        };
        self.push(group, detail, o);
    }

    /// |mean − expected| ≤ 5σ · tol_scale + slack · tol_scale.
    pub fn mc(&mut self, group: &str, detail: &str, est: &McEstimate, expected: f64, slack: f64) {
        let s = self.cfg.tol_scale;
        let tolerance = MC_SIGMAS * s * est.std_error + slack * s;
        let passed = (est.mean - expected).abs() <= tolerance;
        let note = Some(format!("samples={} seed={}", est.samples, est.seed));
        let o = Outcome { measured: est.mean, expected, tolerance, error_bar: Some(est.std_error), passed, note };
        self.push(group, detail, o);
    }

    /// Statistic that must exceed a threshold (used for expected non-commutation).
    pub fn at_least(&mut self, group: &str, detail: &str, measured: f64, threshold: f64, note: &str) {
        let o = Outcome {
            measured,
            expected: threshold,
            tolerance: 0.0,
            error_bar: None,
            passed: measured >= threshold,
            note: Some(note.to_string()),
        };
        self.push(group, detail, o);
    }

    /// Boolean property recorded as 1 (holds) against expected 1.
    pub fn holds(&mut self, group: &str, detail: &str, ok: bool, note: &str) {
        let o = Outcome {
            measured: if ok { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            error_bar: None,
            passed: ok,
            note: (!ok).then(|| note.to_string()),
        };
        self.push(group, detail, o);
    }

    /// Runs one check group; a library error becomes a failing record.
    pub fn group<F>(&mut self, group: &str, f: F)
    where
        F: FnOnce(&mut Self) -> Result<(), Error>,
    {
        if let Err(e) = f(self) {
            let o = Outcome {
                measured: f64::NAN,
                expected: f64::NAN,
                tolerance: 0.0,
                error_bar: None,
                passed: false,
                note: Some(format!("error: {e}")),
            };
            self.push(group, "error", o);
        }
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}
