use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BenchRow, Campaign};
use crate::environment::ScenarioDocument;
use crate::error::{PlanError, Result};
use crate::io::write_atomic;
use crate::planner::{PlannerConfig, RunResult};

pub const CSV_HEADER: [&str; 11] = [
    "scenario",
    "planner",
    "i_min",
    "i_max",
    "i_avg",
    "t_min",
    "t_max",
    "t_avg",
    "theta_avg",
    "cost",
    "fail_pct",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(PlanError::InvalidArgument(format!(
                "unknown format `{s}` (expected csv or json)"
            ))),
        }
    }
}

/// A single planner run as written by `pgbrrt plan`: enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDocument {
    pub version: String,
    pub scenario: ScenarioDocument,
    pub config: PlannerConfig,
    pub result: RunResult,
}

impl RunDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run document serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| PlanError::Parse(format!("run document: {e}")))
    }
}

pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| PlanError::Parse(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| PlanError::Parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_rows_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| PlanError::Parse(format!("csv: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != CSV_HEADER {
        return Err(PlanError::Parse(format!(
            "unexpected csv header {header:?}"
        )));
    }
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| PlanError::Parse(format!("csv: {e}")))
}

pub fn campaign_to_json(campaign: &Campaign) -> String {
    let mut s = serde_json::to_string_pretty(campaign).expect("campaign serializes");
    s.push('\n');
    s
}

pub fn rows_from_json(text: &str) -> Result<Campaign> {
    serde_json::from_str(text).map_err(|e| PlanError::Parse(format!("campaign: {e}")))
}

/// Writes the summary rows as CSV, or the rows together with every run as
/// JSON. The file is replaced atomically.
pub fn export_results(campaign: &Campaign, format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Csv => rows_to_csv(&campaign.rows)?,
        ExportFormat::Json => campaign_to_json(campaign),
    };
    write_atomic(path, text.as_bytes())
}
