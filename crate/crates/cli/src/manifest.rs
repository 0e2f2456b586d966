//! Run manifests: everything needed to reproduce a command's outputs.
//!
//! A manifest records the command, the fully resolved configuration, the
//! seeds used, SHA-256 hashes of every input file, the produced files, and
//! per-stage wall-clock timings. Re-running with the recorded configuration
//! reproduces every output byte for byte; the timing map is the only field
//! expected to differ between runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub failures: Vec<String>,
    pub timings_ms: BTreeMap<String, u64>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: BTreeMap::new(),
            seeds: Vec::new(),
            input_hashes: BTreeMap::new(),
            outputs: Vec::new(),
            failures: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    /// Hash an input file into the manifest.
    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.input_hashes
            .insert(path.display().to_string(), hex::encode(digest));
        Ok(())
    }

    pub fn record_output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    pub fn record_timing(&mut self, stage: &str, since: Instant) {
        self.timings_ms
            .insert(stage.to_string(), since.elapsed().as_millis() as u64);
    }

    /// Write `manifest.json` into the output directory.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
