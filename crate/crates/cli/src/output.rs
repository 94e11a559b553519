//! Report serialization and atomic file writing.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use gaugelab_core::harness::PropertyReport;
use gaugelab_core::ConvergenceReport;

use crate::config::{IntegrateConfig, VerifyConfig};

/// Non-reproducible run metadata, kept in its own block so the rest of a
/// report is byte-identical across reruns of the same config and seed.
fn meta_block() -> serde_json::Value {
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "tool": format!("gaugelab {}", env!("CARGO_PKG_VERSION")),
        "unixTime": unix_time,
    })
}

pub fn integrate_report_json(config: &IntegrateConfig, report: &ConvergenceReport) -> String {
    let value = json!({
        "config": config,
        "report": report,
        "meta": meta_block(),
    });
    serde_json::to_string_pretty(&value).expect("report serialization cannot fail")
}

/// CSV view: one row per (index, replicate) with the index gap repeated.
pub fn integrate_report_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("n,replicate,sum,gap,cells\n");
    for (i, (sums, cells)) in report.sums.iter().zip(&report.cell_counts).enumerate() {
        for (r, (sum, cell)) in sums.iter().zip(cells).enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i + 1,
                r,
                sum,
                report.gaps[i],
                cell
            ));
        }
    }
    out
}

/// Aligned per-index table for terminal use.
pub fn integrate_report_table(report: &ConvergenceReport) -> String {
    let mut out = format!("{:>4} {:>24} {:>14} {:>10}\n", "n", "mean sum", "gap", "cells");
    for (i, (sums, cells)) in report.sums.iter().zip(&report.cell_counts).enumerate() {
        let mean: f64 = sums.iter().sum::<f64>() / sums.len() as f64;
        let total_cells: u64 = cells.iter().sum();
        out.push_str(&format!(
            "{:>4} {:>24.16} {:>14.6e} {:>10}\n",
            i + 1,
            mean,
            report.gaps[i],
            total_cells
        ));
    }
    out
}

pub fn summary_line(report: &ConvergenceReport) -> String {
    let total_cells: u64 = report.cell_counts.iter().flatten().sum();
    format!(
        "estimate={:.12} certified={} gap={:.6e} index={} cells={}",
        report.estimate,
        report.certified,
        report.final_gap(),
        report.stopped_at,
        total_cells
    )
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyOutput<'a> {
    pub config: &'a VerifyConfig,
    pub reports: &'a [PropertyReport],
    pub passed: bool,
    pub meta: serde_json::Value,
}

pub fn verify_report_json(config: &VerifyConfig, reports: &[PropertyReport]) -> String {
    let out = VerifyOutput {
        config,
        reports,
        passed: reports.iter().all(|r| r.passed),
        meta: meta_block(),
    };
    serde_json::to_string_pretty(&out).expect("report serialization cannot fail")
}

/// Writes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
