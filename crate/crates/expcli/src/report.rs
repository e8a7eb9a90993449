//! Report assembly and emission.
//!
//! Everything except `wall_time_ms` is the hash-checked region: it is a
//! pure function of the config and is byte-identical across runs.
//!
//! CSV output holds the result tables only. Each table starts with a
//! header record `table,<columns...>` followed by records `<name>,<cells...>`;
//! list cells are space-separated.

use std::io::Write;
use std::path::Path;

use ipstar_core::{Certificate, Guards};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};
use crate::error::{LabError, Result};
use crate::rng::PRNG_NAME;

pub const SCHEMA: &str = "ipstar-lab/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Body {
    pub config: Value,
    pub guards: Guards,
    pub prng: Option<&'static str>,
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
}

/// Experiment output before assembly.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary
            .insert(key.into(), serde_json::to_value(value).expect("summary value"));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub experiment: String,
    pub config_hash: String,
    pub tool_version: &'static str,
    pub body_hash: String,
    pub body: Body,
    #[serde(skip)]
    pub wall_time_ms: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    /// Fails if any certificate did not re-verify.
    pub fn assemble(cfg: &ExperimentConfig, outcome: Outcome, wall_time_ms: u64) -> Result<Self> {
        if let Some(bad) = outcome.certificates.iter().find(|c| !c.recheck) {
            return Err(LabError::Recheck(format!("{} with inputs {}", bad.op, bad.inputs)));
        }
        let config = cfg.result_value();
        let body = Body {
            config: config.clone(),
            guards: cfg.guards.clone(),
            prng: cfg.experiment.is_randomized().then_some(PRNG_NAME),
            tables: outcome.tables,
            summary: outcome.summary,
            certificates: outcome.certificates,
            notes: outcome.notes,
        };
        let body_hash = sha256_hex(&serde_json::to_vec(&body).expect("body serializes"));
        Ok(Report {
            schema: SCHEMA,
            experiment: cfg.experiment.name().into(),
            config_hash: sha256_hex(config.to_string().as_bytes()),
            tool_version: TOOL_VERSION,
            body_hash,
            body,
            wall_time_ms,
        })
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.body.tables.iter().find(|t| t.name == name)
    }

    /// Pretty JSON of the hash-checked region.
    pub fn hashed_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut()
            .expect("object")
            .insert("wall_time_ms".into(), Value::from(self.wall_time_ms));
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for row in csv_records(self) {
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell_text).collect::<Vec<_>>().join(" "),
        Value::Object(_) => v.to_string(),
    }
}

/// The CSV records of a report's tables, headers included.
pub fn csv_records(report: &Report) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for t in &report.body.tables {
        out.push(
            std::iter::once("table".to_string())
                .chain(t.columns.iter().cloned())
                .collect(),
        );
        for row in &t.rows {
            out.push(
                std::iter::once(t.name.clone())
                    .chain(row.iter().map(cell_text))
                    .collect(),
            );
        }
    }
    out
}

/// Writes via a temporary file in the target directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| LabError::Io(e.error))?;
    Ok(())
}
