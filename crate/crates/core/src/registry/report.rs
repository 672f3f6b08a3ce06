use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::classify::{classify, Classification, ClassifierThresholds};
use super::types::AppRequirement;
use crate::error::{Error, Result};

/// Column layout of the CSV registry export. The class columns describe the
/// demanding end of each requirement.
pub const CSV_HEADER: [&str; 9] = [
    "id", "category", "links", "range", "frequency", "latency", "spatial", "temporal", "paradigm",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "table" | "plain" | "text" => Ok(ReportFormat::Table),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Application row with its classification, as emitted by the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    #[serde(flatten)]
    pub app: AppRequirement,
    pub classification: Classification,
}

fn entries(apps: &[AppRequirement], thresholds: &ClassifierThresholds) -> Result<Vec<ReportEntry>> {
    apps.iter()
        .map(|app| {
            Ok(ReportEntry {
                app: app.clone(),
                classification: classify(app, thresholds)?,
            })
        })
        .collect()
}

fn row(entry: &ReportEntry) -> [String; 9] {
    let app = &entry.app;
    let class = entry.classification.demanding;
    [
        app.id.clone(),
        app.category.to_string(),
        app.links_label(),
        app.range.to_string(),
        app.frequency.to_string(),
        app.latency.to_string(),
        class.spatial.to_string(),
        class.temporal.to_string(),
        class.paradigm.to_string(),
    ]
}

/// Renders every application with its classification.
pub fn registry_report(
    apps: &[AppRequirement],
    thresholds: &ClassifierThresholds,
    format: ReportFormat,
) -> Result<String> {
    let entries = entries(apps, thresholds)?;
    match format {
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(CSV_HEADER)?;
            for entry in &entries {
                writer.write_record(row(entry))?;
            }
            let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => Ok(serde_json::to_string_pretty(&entries)? + "\n"),
        ReportFormat::Table => {
            let header = CSV_HEADER.map(str::to_string);
            let rows: Vec<[String; 9]> = entries.iter().map(row).collect();
            let mut widths = header.clone().map(|h| h.chars().count());
            for r in &rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut out = String::new();
            for r in std::iter::once(&header).chain(&rows) {
                let line: Vec<String> = r
                    .iter()
                    .zip(widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                writeln!(out, "{}", line.join(" | ").trim_end()).unwrap();
            }
            Ok(out)
        }
    }
}
