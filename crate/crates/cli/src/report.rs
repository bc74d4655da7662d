//! JSON report files: `{"version": "1", "timestamp": ..., "checks": [...]}`
//! with checks sorted by id. Two runs on the same inputs differ only in the
//! timestamp.

use std::path::Path;

use dynex_core::CheckReport;
use serde::Serialize;

use crate::error::{write_file, CliError, Result};

pub const REPORT_VERSION: &str = "1";

#[derive(Serialize)]
struct ReportFile<'a> {
    version: &'static str,
    timestamp: &'a str,
    checks: Vec<&'a CheckReport>,
}

/// Checks in report order; fails on a repeated id.
pub fn sorted_checks(reports: &[CheckReport]) -> Result<Vec<&CheckReport>> {
    let mut checks: Vec<&CheckReport> = reports.iter().collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = checks.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(CliError::DuplicateId(w[0].id.clone()));
    }
    Ok(checks)
}

pub fn render_report(reports: &[CheckReport], timestamp: &str) -> Result<String> {
    let file = ReportFile { version: REPORT_VERSION, timestamp, checks: sorted_checks(reports)? };
    let mut out = serde_json::to_string_pretty(&file)?;
    out.push('\n');
    Ok(out)
}

pub fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn emit_report(reports: &[CheckReport], path: &Path) -> Result<()> {
    let json = render_report(reports, &timestamp_now())?;
    write_file(path, json.as_bytes())
}

/// `true` when every check passed; indeterminate counts as not passed.
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

/// One line per check for the terminal.
pub fn summary_lines(reports: &[CheckReport]) -> Vec<String> {
    let mut checks: Vec<&CheckReport> = reports.iter().collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    checks
        .into_iter()
        .map(|r| {
            let tag = match r.status {
                dynex_core::Status::Pass => "PASS",
                dynex_core::Status::Fail => "FAIL",
                dynex_core::Status::Indeterminate => "INDETERMINATE",
            };
            format!("{tag:<13} {}  margin={:.6e} tolerance={:.6e}", r.id, r.margin, r.tolerance)
        })
        .collect()
}
