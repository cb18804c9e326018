//! Experiment reports and sample persistence.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, OutputFormat};
use crate::domain::DegreeSequence;
use crate::error::{Error, Result};

pub const THRESHOLDS: &str = "expectations pass within 4 standard errors; \
concentration passes at an eps-regular fraction >= 0.99; trends pass when strictly decreasing; \
rational sums pass on exact equality";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub code_version: String,
    pub thresholds: String,
}

impl Provenance {
    pub fn new(config: &ExperimentConfig) -> Self {
        Provenance {
            config: config.clone(),
            seed: config.seed,
            code_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            thresholds: THRESHOLDS.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub provenance: Provenance,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<SummaryEntry>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, columns: &[&str]) -> Self {
        ExperimentReport {
            provenance: Provenance::new(config),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.summary.push(SummaryEntry {
            name: name.into(),
            value: value.into(),
        });
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn summary_value(&self, name: &str) -> Option<&Value> {
        self.summary.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    pub fn summary_f64(&self, name: &str) -> Option<f64> {
        self.summary_value(name).and_then(Value::as_f64)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// CSV with a `#`-prefixed provenance block above the header row.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        let config = serde_json::to_string(&self.provenance.config).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "# experiment: {}", self.provenance.config.experiment.name())?;
        writeln!(out, "# config: {config}")?;
        writeln!(out, "# seed: {}", self.provenance.seed)?;
        writeln!(out, "# code_version: {}", self.provenance.code_version)?;
        writeln!(out, "# thresholds: {}", self.provenance.thresholds)?;
        for e in &self.summary {
            writeln!(out, "# summary {}: {}", e.name, e.value)?;
        }
        for v in &self.verdicts {
            let word = if v.pass { "pass" } else { "fail" };
            writeln!(out, "# verdict {}: {word} ({})", v.name, v.detail)?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(&self.columns).map_err(io)?;
            for row in &self.rows {
                w.write_record(row.iter().map(cell_text)).map_err(io)?;
            }
            w.flush()?;
        }
        String::from_utf8(out).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Jsonl => Err(Error::config("jsonl is only used for sample dumps")),
        }
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub trial: u64,
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    pub k: u64,
}

impl SampleRecord {
    pub fn new(trial: u64, ds: &DegreeSequence) -> Self {
        SampleRecord {
            trial,
            s: ds.s().to_vec(),
            t: ds.t().to_vec(),
            k: ds.row_sum(),
        }
    }
}

/// One JSON object per line, in trial order.
pub fn write_samples_jsonl(samples: &[DegreeSequence], mut out: impl Write) -> Result<()> {
    for (r, ds) in samples.iter().enumerate() {
        let line = serde_json::to_string(&SampleRecord::new(r as u64, ds)).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_samples_jsonl(text: &str) -> Result<Vec<SampleRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Io(e.to_string())))
        .collect()
}
