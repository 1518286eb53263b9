//! Experiment outputs: named tables, provenance, CSV + manifest writing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::spec::ExperimentSpec;
use crate::error::{Error, Result};
use crate::io::{atomic_write, fmt_sig12, round_sig12, sha256_hex};

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width mismatch in table {}",
            self.name
        );
        self.rows.push(row);
    }

    /// Render as CSV with 12-significant-digit cells.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_sig12(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Run provenance. The wall time stays in memory only; the on-disk manifest
/// is a pure function of spec + seed so rerun checksums match.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
    pub wall_time_s: f64,
}

impl Provenance {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: 0.0,
        }
    }
}

/// In-memory result of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub tables: Vec<Table>,
    pub summary: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn new(spec: &ExperimentSpec) -> Self {
        Self {
            spec: spec.clone(),
            tables: Vec::new(),
            summary: BTreeMap::new(),
            provenance: Provenance::new(spec.seed),
        }
    }

    pub fn insert_summary(&mut self, key: impl Into<String>, value: f64) {
        self.summary.insert(key.into(), round_sig12(value));
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }
}

/// One output file recorded in the manifest.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub sha256: String,
}

/// The JSON manifest written next to the CSV series.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema: String,
    pub kind: String,
    pub seed: u64,
    pub version: String,
    pub spec: ExperimentSpec,
    pub summary: BTreeMap<String, f64>,
    pub files: Vec<ManifestEntry>,
}

/// Write every table as `<out_dir>/<name>.csv` plus `manifest.json`, all
/// atomically. Returns the manifest.
pub fn write_result(result: &ExperimentResult, out_dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for table in &result.tables {
        if table.name.contains(['/', '\\']) {
            return Err(Error::Config(format!(
                "table name '{}' is not a valid file stem",
                table.name
            )));
        }
        let file = format!("{}.csv", table.name);
        let bytes = table.to_csv_string().into_bytes();
        atomic_write(&out_dir.join(&file), &bytes)?;
        files.push(ManifestEntry {
            name: table.name.clone(),
            file,
            sha256: sha256_hex(&bytes),
        });
    }
    let manifest = Manifest {
        schema: "gadgetsim/manifest/v1".to_string(),
        kind: result.spec.kind.name().to_string(),
        seed: result.provenance.seed,
        version: result.provenance.version.clone(),
        spec: result.spec.clone(),
        summary: result.summary.clone(),
        files,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    atomic_write(&out_dir.join("manifest.json"), json.as_bytes())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering_is_deterministic() {
        let mut t = Table::new("demo", vec!["t".into(), "v".into()]);
        t.push_row(vec![0.0, 1.0]);
        t.push_row(vec![0.5, -2.0]);
        let csv = t.to_csv_string();
        assert_eq!(
            csv,
            "t,v\n0.00000000000e0,1.00000000000e0\n5.00000000000e-1,-2.00000000000e0\n"
        );
    }

    #[test]
    #[should_panic(expected = "row width mismatch")]
    fn row_width_is_enforced() {
        let mut t = Table::new("demo", vec!["a".into()]);
        t.push_row(vec![1.0, 2.0]);
    }
}
