use std::fs::OpenOptions;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagram::LinkDiagram;
use crate::geometry::Classification;

pub const CENSUS_ENV: &str = "SURGERYLAB_CENSUS";
pub const DEFAULT_CENSUS: &str = "census.jsonl";

/// One solved manifold. `(diagram_hash, filling)` is the key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub diagram_hash: String,
    pub filling: String,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    pub residual: f64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// The full report as first emitted, replayed verbatim on a hit.
    pub report: serde_json::Value,
}

/// SHA-256 of the PD text, hex encoded.
pub fn diagram_hash(d: &LinkDiagram) -> String {
    let digest = Sha256::digest(d.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Append-only JSON-lines store.
#[derive(Debug, Clone)]
pub struct Census {
    path: PathBuf,
}

impl Census {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Census { path: path.into() }
    }

    /// Path from `SURGERYLAB_CENSUS`, else `./census.jsonl`.
    pub fn from_env() -> Self {
        Census::new(std::env::var_os(CENSUS_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CENSUS.into()))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All readable entries; corrupt lines are skipped with a warning.
    pub fn entries(&self) -> io::Result<Vec<CensusEntry>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let mut out = Vec::new();
        for (k, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&line) {
                Ok(e) => out.push(e),
                Err(err) => log::warn!("{}:{}: skipping corrupt census line: {err}", self.path.display(), k + 1),
            }
        }
        Ok(out)
    }

    /// Latest entry for the key.
    pub fn lookup(&self, diagram_hash: &str, filling: &str) -> io::Result<Option<CensusEntry>> {
        Ok(self.entries()?.into_iter().rev().find(|e| e.diagram_hash == diagram_hash && e.filling == filling))
    }

    pub fn append(&self, entry: &CensusEntry) -> io::Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let line = serde_json::to_string(entry).map_err(io::Error::other)?;
        writeln!(f, "{line}")?;
        f.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(filling: &str, v: f64) -> CensusEntry {
        CensusEntry {
            diagram_hash: "h".into(),
            filling: filling.into(),
            classification: Classification::Geometric,
            volume: Some(v),
            residual: 0.0,
            timestamp: 0,
            report: serde_json::json!({ "volume": v }),
        }
    }

    #[test]
    fn append_lookup_and_skip_corrupt_lines() {
        let dir = tempfile::tempdir().unwrap();
        let c = Census::new(dir.path().join("c.jsonl"));
        assert_eq!(c.lookup("h", "*").unwrap(), None);
        c.append(&entry("*", 1.0)).unwrap();
        std::fs::OpenOptions::new().append(true).open(c.path()).unwrap().write_all(b"{not json\n").unwrap();
        c.append(&entry("*", 2.0)).unwrap();
        c.append(&entry("1/2", 3.0)).unwrap();
        assert_eq!(c.entries().unwrap().len(), 3);
        assert_eq!(c.lookup("h", "*").unwrap().unwrap().volume, Some(2.0));
        assert_eq!(c.lookup("g", "*").unwrap(), None);
    }
}
