//! Table serialization and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explorer::Record;

pub const CSV_HEADER: &str =
    "m,n,r,tau,phi,dx,dp,p_ng,parity,dparity,delta_phi,delta_phi_svs,d_ng,pxd,flags";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!(
                "unknown format '{s}' (csv, json)"
            ))),
        }
    }
}

/// CSV with a header row. Flags are `;`-separated; non-finite numbers are
/// written as `NaN`, `inf` and `-inf`.
pub fn to_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.r,
            r.tau,
            r.phi,
            r.dx,
            r.dp,
            r.p_ng,
            r.parity,
            r.dparity,
            r.delta_phi,
            r.delta_phi_svs,
            r.d_ng,
            r.pxd,
            flags.join(";")
        );
    }
    out
}

/// JSON array of records; non-finite numbers become `null`.
pub fn to_json(records: &[Record]) -> Result<String> {
    serde_json::to_string_pretty(records)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))
}

pub fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(to_csv(records)),
        Format::Json => to_json(records),
    }
}

/// Writes `contents` through a temporary file in the target directory and
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `out.csv` -> `out.csv.meta.json`
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Run description stored next to a data file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta<'a, S: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub spec: &'a S,
    pub rows: usize,
    pub created_unix: u64,
}

pub fn write_meta<S: Serialize>(
    path: &Path,
    command: &str,
    spec: &S,
    rows: usize,
) -> std::io::Result<()> {
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        spec,
        rows,
        created_unix,
    };
    let mut text = serde_json::to_string_pretty(&meta).map_err(std::io::Error::other)?;
    text.push('\n');
    write_atomic(&meta_path(path), text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::{evaluate, Flag};

    fn records() -> Vec<Record> {
        vec![
            evaluate((0, 1), 0.5, 0.9, 0.01, 2.0, 2.0).unwrap(),
            evaluate((0, 1), 0.0, 0.5, 0.01, 2.0, 2.0).unwrap(),
        ]
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&records());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        for l in &lines {
            assert_eq!(l.split(',').count(), 15);
        }
        assert!(lines[2].ends_with(Flag::Undefined.as_str()));
        assert!(lines[2].contains("NaN"));
    }

    #[test]
    fn json_nulls_for_undefined() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&records()).unwrap()).unwrap();
        assert!(v[1]["delta_phi"].is_null());
        assert_eq!(v[1]["flags"][0], "undefined");
        assert_eq!(v[0]["m"], 0);
    }

    #[test]
    fn atomic_write_and_meta() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        write_meta(&path, "sweep", &"spec", 1).unwrap();
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(meta_path(&path)).unwrap()).unwrap();
        assert_eq!(meta["rows"], 1);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
