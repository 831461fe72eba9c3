//! CSV tables and the run manifest.

use outflow_core::criteria::Criterion;
use outflow_core::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// 17 significant digits, so that values round-trip.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes one table; every row must have as many cells as the header.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_criteria(path: &Path, items: &[Criterion]) -> Result<()> {
    write_table(
        path,
        &["id", "status", "detail"],
        items.iter().map(|c| vec![c.id.clone(), if c.pass { "PASS" } else { "FAIL" }.into(), c.detail.clone()]),
    )
}

pub fn read_criteria(path: &Path) -> Result<Vec<Criterion>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 3 {
            return Err(Error::Io(format!("{}: expected 3 columns", path.display())));
        }
        out.push(Criterion::new(&rec[0], &rec[1] == "PASS", &rec[2]));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionEntry {
    pub id: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub config_sha256: String,
    pub config: String,
    pub seed: u64,
    pub threads: usize,
    /// seconds since the Unix epoch
    pub started: f64,
    pub finished: f64,
    pub exit_code: i32,
    pub error: Option<String>,
    pub files: Vec<FileEntry>,
    pub criteria: Vec<CriterionEntry>,
}

impl RunManifest {
    pub fn file_entry(dir: &Path, name: &str) -> Result<FileEntry> {
        let bytes = fs::read(dir.join(name))?;
        Ok(FileEntry { name: name.into(), bytes: bytes.len() as u64, sha256: hex::encode(Sha256::digest(&bytes)) })
    }

    /// Written last, through a temporary file and a rename, so a present
    /// manifest always describes complete outputs.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let tmp = dir.join(".manifest.json.tmp");
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

pub fn now() -> f64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn criteria_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        let items = vec![Criterion::new("1-rho", true, "slope -4.0, \"quoted\""), Criterion::new("2", false, "a,b")];
        write_criteria(&p, &items).unwrap();
        assert_eq!(read_criteria(&p).unwrap(), items);
    }
}
