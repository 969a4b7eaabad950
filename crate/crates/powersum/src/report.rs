//! Versioned JSON run reports and their persistence.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

pub const SCHEMA_VERSION: u32 = 1;

/// How a run was executed. Excluded from [`RunReport::canonical`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Execution {
    pub workers: usize,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub seed: Option<u64>,
    pub execution: Execution,
}

impl RunReport {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        inputs: Value,
        outputs: Value,
        execution: Execution,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_owned(),
            inputs,
            outputs,
            timestamp: now_rfc3339(),
            seed,
            execution,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only finite numbers and strings")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// The report with the timestamp and execution details removed; equal
    /// flags give byte-identical canonical output.
    pub fn canonical(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Value::Object(map) = &mut v {
            map.remove("timestamp");
            map.remove("execution");
        }
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    /// File stem `command_timestamp_seed`, with the timestamp made safe for
    /// file names.
    pub fn file_stem(&self) -> String {
        let stamp: String = self
            .timestamp
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '.')
            .collect();
        match self.seed {
            Some(seed) => format!("{}_{}_{}", self.command, stamp, seed),
            None => format!("{}_{}_none", self.command, stamp),
        }
    }

    /// Writes the report into `dir` (created if missing) and returns its path.
    /// An existing file is never overwritten; a counter is appended instead.
    pub fn persist(&self, dir: &Path) -> io::Result<PathBuf> {
        let (path, mut file) = create_unique(dir, &self.file_stem(), "json")?;
        file.write_all(self.to_json().as_bytes())?;
        file.write_all(b"\n")?;
        Ok(path)
    }
}

pub fn now_rfc3339() -> String {
    OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .expect("UTC timestamps always format")
}

pub fn create_unique(dir: &Path, stem: &str, ext: &str) -> io::Result<(PathBuf, File)> {
    fs::create_dir_all(dir)?;
    for k in 0u32.. {
        let name = if k == 0 {
            format!("{stem}.{ext}")
        } else {
            format!("{stem}_{k}.{ext}")
        };
        let path = dir.join(name);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(file) => return Ok((path, file)),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("u32 counter exhausted")
}
