//! Experiment reports and their CSV / JSON serialization.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// One table row: a statistic at one `(n, q, t)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub q: Option<usize>,
    pub t: Option<f64>,
    pub statistic: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub reps: usize,
    pub seed: u64,
}

/// A named verdict against a harness threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-replication values behind a row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawSample {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub metadata: serde_json::Map<String, serde_json::Value>,
    #[serde(skip)]
    pub raw: Vec<RawSample>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed,
            rows: Vec::new(),
            checks: Vec::new(),
            metadata: serde_json::Map::new(),
            raw: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn row(&mut self, n: usize, q: Option<usize>, t: Option<f64>, statistic: &str, value: f64, std_error: Option<f64>, reps: usize) {
        self.rows.push(Row {
            experiment: self.experiment.clone(),
            n,
            q,
            t,
            statistic: statistic.to_string(),
            value,
            std_error,
            reps,
            seed: self.seed,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn raw_sample(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.raw.push(RawSample {
            name: name.into(),
            values,
        });
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        self.metadata
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable metadata"));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Rows matching a statistic name, in insertion order.
    pub fn rows_for<'a>(&'a self, statistic: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.statistic == statistic)
    }

    pub fn find_raw(&self, name: &str) -> Option<&RawSample> {
        self.raw.iter().find(|r| r.name == name)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `<name>.csv`, `<name>_summary.json` and one CSV per raw sample
    /// under `raw/`; returns the written paths.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let table = dir.join(format!("{}.csv", self.experiment));
        self.write_csv(fs::File::create(&table)?)?;
        written.push(table);
        let summary = dir.join(format!("{}_summary.json", self.experiment));
        fs::write(&summary, serde_json::to_string_pretty(self)?)?;
        written.push(summary);
        if !self.raw.is_empty() {
            let raw_dir = dir.join("raw");
            fs::create_dir_all(&raw_dir)?;
            for sample in &self.raw {
                let path = raw_dir.join(format!("{}_{}.csv", self.experiment, sample.name));
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["rep", "value"])?;
                for (i, v) in sample.values.iter().enumerate() {
                    w.write_record([i.to_string(), v.to_string()])?;
                }
                w.flush()?;
                written.push(path);
            }
        }
        Ok(written)
    }
}
