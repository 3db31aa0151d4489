//! Report assembly and rendering. Output is byte-stable for a fixed
//! manifest and seed; per-check timings appear only behind `--timings`.

use serde::Serialize;

use crate::suite::{CheckRecord, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub n: usize,
    pub checks: Vec<CheckEntry>,
    pub summary: Summary,
}

#[derive(Serialize)]
pub struct CheckEntry {
    pub check_id: String,
    pub statement: String,
    pub label: String,
    pub status: String,
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(seed: u64, n: usize, records: Vec<CheckRecord>) -> Self {
        let count = |status: Status| records.iter().filter(|r| r.status == status).count();
        let summary = Summary {
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        let checks = records
            .into_iter()
            .map(|r| CheckEntry {
                check_id: r.check_id,
                statement: r.statement,
                label: r.label,
                status: r.status.as_str().to_string(),
                residual: r.residual,
                millis: r.millis,
            })
            .collect();
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            n,
            checks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self).expect("report serializes");
                out.push('\n');
                out
            }
            Format::Text => {
                let mut out = String::new();
                for c in &self.checks {
                    out.push_str(&format!(
                        "{}  {:<7}  {}  ({})",
                        c.check_id, c.status, c.statement, c.label
                    ));
                    if !c.residual.is_empty() {
                        out.push_str(&format!("  residual: {}", c.residual));
                    }
                    if let Some(ms) = c.millis {
                        out.push_str(&format!("  [{ms} ms]"));
                    }
                    out.push('\n');
                }
                out.push_str(&format!(
                    "summary: {} pass, {} fail, {} skipped (seed {}, n {})\n",
                    self.summary.pass, self.summary.fail, self.summary.skipped, self.seed, self.n
                ));
                out
            }
        }
    }
}
