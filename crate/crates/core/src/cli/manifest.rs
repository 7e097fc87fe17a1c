//! Run manifests: what was run, on which inputs, producing which outputs.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandManifest {
    pub command: String,
    pub options: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub tool_version: String,
    /// UTC, RFC 3339.
    pub timestamp: String,
    /// Command-specific record (resolved configuration, summaries, ledgers).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
}

impl CommandManifest {
    pub fn new<T: Serialize>(command: &str, options: &T, inputs: Vec<FileDigest>) -> Self {
        CommandManifest {
            command: command.to_string(),
            options: serde_json::to_value(options).unwrap_or(serde_json::Value::Null),
            inputs,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            extra: None,
        }
    }

    /// Writes `<data>.manifest.json` beside the data file.
    pub fn write_next_to(&self, data: &Path) -> Result<()> {
        let mut name = data.as_os_str().to_owned();
        name.push(".manifest.json");
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        std::fs::write(&name, text).map_err(|e| Error::Io(format!("{}: {e}", Path::new(&name).display())))
    }
}
