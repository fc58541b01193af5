use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::SynthOutput;
use crate::chain_store::{FileKind, LABELS_FILE};
use crate::error::{Error, Result};

pub const LABELS_JSON_FILE: &str = LABELS_FILE;
pub const TARGETS_FILE: &str = "targets.json";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

impl SynthOutput {
    /// Every output file by name, ledger files included.
    pub fn files(&self) -> BTreeMap<String, Vec<u8>> {
        let mut out = BTreeMap::new();
        for kind in FileKind::ALL {
            out.insert(kind.file_name().to_string(), self.texts.get(kind).to_vec());
        }
        let json = |v: String| (v + "\n").into_bytes();
        out.insert(
            LABELS_JSON_FILE.to_string(),
            json(serde_json::to_string_pretty(&self.labels).expect("labels serialize")),
        );
        out.insert(
            TARGETS_FILE.to_string(),
            json(serde_json::to_string_pretty(&self.targets).expect("targets serialize")),
        );
        out.insert(GROUND_TRUTH_FILE.to_string(), json(self.truth.to_json()));
        out
    }

    /// Lowercase hex SHA-256 per output file.
    pub fn digests(&self) -> BTreeMap<String, String> {
        self.files()
            .into_iter()
            .map(|(name, bytes)| (name, hex::encode(Sha256::digest(&bytes))))
            .collect()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, bytes) in self.files() {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }
}
