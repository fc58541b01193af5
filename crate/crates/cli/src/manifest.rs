use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Written by every subcommand next to its outputs.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Flag name to path as given.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of each configuration input (targets, labels, detector config, scenario).
    pub config_digests: BTreeMap<String, String>,
    pub threads: Option<usize>,
    /// Records seen or produced per stage.
    pub counts: BTreeMap<String, usize>,
    /// SHA-256 of every file written, manifest excluded.
    pub outputs: BTreeMap<String, String>,
    pub wall_time_ms: u128,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, flag: &str, path: &std::path::Path) {
        self.inputs
            .insert(flag.to_string(), path.display().to_string());
    }

    pub fn digest(&mut self, key: &str, bytes: &[u8]) {
        self.config_digests
            .insert(key.to_string(), sha256_hex(bytes));
    }

    pub fn count(&mut self, key: &str, n: usize) {
        self.counts.insert(key.to_string(), n);
    }
}
