//! Self-test criteria: each function runs one end-to-end check and returns
//! a report with a pass flag and a human-readable detail line. The CLI
//! `selftest` subcommand and the acceptance test suite both call these.

/// Outcome of one self-test criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{}: {} ({})",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.detail
        )
    }
}
