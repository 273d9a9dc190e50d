//! Run manifests: what was asked for, with which parameters, and hashes of
//! everything written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputHash {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    /// Command-line arguments with any `--out` removed.
    pub args: Vec<String>,
    pub variant: serde_json::Value,
    pub calibration: serde_json::Value,
    pub input_hash: String,
    pub outputs: Vec<OutputHash>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Drops `--out DIR` and `--out=DIR` from an argument list.
pub fn strip_out(args: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            kept.push(a.clone());
        }
    }
    kept
}

impl RunManifest {
    pub fn new(
        command: &str,
        args: &[String],
        variant: serde_json::Value,
        calibration: serde_json::Value,
    ) -> RunManifest {
        let mut m = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: strip_out(args),
            variant,
            calibration,
            input_hash: String::new(),
            outputs: Vec::new(),
        };
        m.input_hash = m.derive_input_hash();
        m
    }

    /// Hash of the canonical JSON form of the inputs. Object keys are
    /// sorted, so the result does not depend on field order.
    pub fn derive_input_hash(&self) -> String {
        let canonical = json!({
            "tool_version": self.tool_version,
            "command": self.command,
            "args": self.args,
            "variant": self.variant,
            "calibration": self.calibration,
        });
        sha256_hex(canonical.to_string().as_bytes())
    }
}

/// Files produced by one command, kept in memory until written.
#[derive(Debug, Default)]
pub struct OutputSet {
    pub stem: String,
    pub files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn new(stem: impl Into<String>) -> OutputSet {
        OutputSet {
            stem: stem.into(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    pub fn manifest_name(&self) -> String {
        format!("{}.manifest.json", self.stem)
    }

    /// Writes every file and the manifest into `dir`; returns the manifest
    /// path.
    pub fn write(&self, dir: &Path, manifest: &mut RunManifest) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        manifest.outputs.clear();
        for (name, content) in &self.files {
            let path = dir.join(name);
            fs::write(&path, content).map_err(|e| io_err(&path, e))?;
            manifest.outputs.push(OutputHash {
                file: name.clone(),
                sha256: sha256_hex(content.as_bytes()),
            });
        }
        let path = dir.join(self.manifest_name());
        let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::Io(e.to_string()))? + "\n";
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

pub fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
