//! Report assembly: a JSON document whose body depends only on the run
//! configuration, with wall-clock data confined to the header.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::record::CheckRecord;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    /// Seconds since the Unix epoch.
    pub generated_at: u64,
    pub total_seconds: f64,
    /// Wall time per suite.
    pub suite_seconds: BTreeMap<String, f64>,
    /// Wall time per check id, keyed "suite:id".
    pub timings: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Body {
    pub config: RunConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub header: Header,
    pub body: Body,
}

impl Report {
    /// Records are sorted by (suite, id) so the body is independent of execution order.
    pub fn new(config: RunConfig, mut records: Vec<CheckRecord>, suite_seconds: BTreeMap<String, f64>, total: Duration) -> Report {
        records.sort_by(|a, b| (a.suite, &a.id).cmp(&(b.suite, &b.id)));
        let timings = records.iter().map(|r| (format!("{}:{}", r.suite, r.id), r.runtime.as_secs_f64())).collect();
        let passed = records.iter().filter(|r| r.passed()).count();
        let summary = Summary { total: records.len(), passed, failed: records.len() - passed };
        let generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            schema_version: SCHEMA_VERSION,
            header: Header { generated_at, total_seconds: total.as_secs_f64(), suite_seconds, timings },
            body: Body { config, summary, records },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.body.summary.failed == 0
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// The deterministic part of the report.
    pub fn body_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(&self.body)
    }

    /// CSV projection (id, status, value, expected); ids are prefixed by the suite.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "status", "value", "expected"])?;
        for r in &self.body.records {
            let status = if r.passed() { "pass" } else { "fail" };
            w.write_record([format!("{}:{}", r.suite, r.id), status.into(), r.measured.to_string(), r.expected.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Suite;
    use crate::record::Ctx;

    fn sample() -> Report {
        let cfg = RunConfig::for_suite(Suite::Appendix);
        let mut ctx = Ctx::new(&cfg, Suite::Appendix);
        ctx.close("jacobi-forms", "z", 1.0, 1.0, 0.0);
        ctx.exact("ak-identity", "a", 1, 2);
        let records = ctx.finish();
        Report::new(cfg, records, BTreeMap::new(), Duration::from_millis(3))
    }

    #[test]
    fn body_is_sorted_and_free_of_timings() {
        let r = sample();
        assert_eq!(r.body.records[0].id, "ak-identity/a");
        assert_eq!(r.body.summary.failed, 1);
        assert!(!r.all_passed());
        let body = r.body_json().unwrap();
        assert!(!body.contains("seconds") && !body.contains("runtime") && !body.contains("generated_at"));
        assert_eq!(r.header.timings.len(), 2);
    }

    #[test]
    fn csv_has_one_row_per_record() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "id,status,value,expected");
        assert_eq!(lines[1], "appendix:ak-identity/a,fail,1,2");
        assert_eq!(lines.len(), 3);
    }
}
