//! Verification runner: named suites that compare the closed forms of the
//! `schwinger` crate against brute-force oracles and emit check records.

pub mod catalog;
pub mod config;
pub mod record;
pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

pub use config::{RunConfig, Selection, Suite};
pub use record::{CheckRecord, Status};
pub use report::Report;

/// Runs the configured suites in order and assembles the report.
pub fn run(cfg: &RunConfig) -> Result<Report, String> {
    cfg.validate()?;
    let start = Instant::now();
    let mut records = Vec::new();
    let mut suite_seconds = BTreeMap::new();
    for &s in &cfg.suites {
        let t = Instant::now();
        records.extend(suites::run_suite(cfg, s));
        suite_seconds.insert(s.name().to_string(), t.elapsed().as_secs_f64());
    }
    Ok(Report::new(cfg.clone(), records, suite_seconds, start.elapsed()))
}
